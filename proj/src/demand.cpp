#include "mcinv/demand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mcinv/common.hpp"
#include "mcinv/rng.hpp"
#include "mcinv/stats.hpp"

namespace mcinv {

Marginal Marginal::uniform_dist(double a, double b) {
  Marginal m;
  m.kind = Kind::uniform;
  m.a = a;
  m.b = b;
  return m;
}

Marginal Marginal::exponential_dist(double rate) {
  Marginal m;
  m.kind = Kind::exponential;
  m.rate = rate;
  return m;
}

Marginal Marginal::lognormal_dist(double mu, double sigma) {
  Marginal m;
  m.kind = Kind::lognormal;
  m.mu = mu;
  m.sigma = sigma;
  return m;
}

Marginal Marginal::discrete_dist(std::vector<double> values, std::vector<double> probs) {
  Marginal m;
  m.kind = Kind::discrete;
  m.values = std::move(values);
  m.probs = std::move(probs);
  return m;
}

double Marginal::sample_from_unit(double u) const {
  switch (kind) {
    case Kind::uniform:
      return a + (b - a) * u;
    case Kind::exponential:
      return -std::log1p(-u) / rate;
    case Kind::lognormal:
      return std::exp(mu + sigma * inverse_normal_cdf(u));
    case Kind::discrete: {
      double cum = 0.0;
      for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (u <= cum) return values[i];
      }
      return values.back();
    }
  }
  return 0.0;
}

double Marginal::pdf(double x) const {
  switch (kind) {
    case Kind::uniform:
      return (x >= a && x <= b) ? 1.0 / (b - a) : 0.0;
    case Kind::exponential:
      return x >= 0.0 ? rate * std::exp(-rate * x) : 0.0;
    case Kind::lognormal: {
      if (x <= 0.0) return 0.0;
      const double z = (std::log(x) - mu) / sigma;
      return std::exp(-0.5 * z * z) / (x * sigma * std::sqrt(2.0 * M_PI));
    }
    case Kind::discrete:
      throw ValidationError("pdf undefined for a discrete marginal");
  }
  return 0.0;
}

double Marginal::cdf(double x) const {
  switch (kind) {
    case Kind::uniform:
      if (x < a) return 0.0;
      if (x > b) return 1.0;
      return (x - a) / (b - a);
    case Kind::exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-rate * x);
    case Kind::lognormal: {
      if (x <= 0.0) return 0.0;
      const double z = (std::log(x) - mu) / sigma;
      return 0.5 * std::erfc(-z / std::sqrt(2.0));
    }
    case Kind::discrete: {
      double cum = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] <= x) cum += probs[i];
      }
      return cum;
    }
  }
  return 0.0;
}

double Marginal::quantile(double q) const {
  q = std::clamp(q, 0.0, 1.0);
  switch (kind) {
    case Kind::uniform:
      return a + (b - a) * q;
    case Kind::exponential:
      return q >= 1.0 ? std::numeric_limits<double>::infinity() : -std::log1p(-q) / rate;
    case Kind::lognormal:
      return std::exp(mu + sigma * inverse_normal_cdf(q));
    case Kind::discrete: {
      double cum = 0.0;
      for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (q <= cum) return values[i];
      }
      return values.back();
    }
  }
  return 0.0;
}

double Marginal::mean() const {
  switch (kind) {
    case Kind::uniform:
      return 0.5 * (a + b);
    case Kind::exponential:
      return 1.0 / rate;
    case Kind::lognormal:
      return std::exp(mu + 0.5 * sigma * sigma);
    case Kind::discrete: {
      double m = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * probs[i];
      return m;
    }
  }
  return 0.0;
}

void Marginal::validate(int index) const {
  const std::string tag = "marginal " + std::to_string(index) + ": ";
  switch (kind) {
    case Kind::uniform:
      if (!(a >= 0.0)) throw ValidationError(tag + "uniform lower bound < 0");
      if (!(b > a)) throw ValidationError(tag + "uniform upper bound must exceed lower bound");
      break;
    case Kind::exponential:
      if (!(rate > 0.0)) throw ValidationError(tag + "exponential rate must be positive");
      break;
    case Kind::lognormal:
      if (!(sigma > 0.0)) throw ValidationError(tag + "lognormal sigma must be positive");
      if (!std::isfinite(mu)) throw ValidationError(tag + "lognormal mu must be finite");
      break;
    case Kind::discrete: {
      if (values.empty() || values.size() != probs.size())
        throw ValidationError(tag + "discrete support and probabilities must match and be nonempty");
      double sum = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0)) throw ValidationError(tag + "discrete support value < 0");
        if (!(probs[i] > 0.0)) throw ValidationError(tag + "discrete probability must be positive");
        if (i > 0 && !(values[i] > values[i - 1]))
          throw ValidationError(tag + "discrete support must be strictly increasing");
        sum += probs[i];
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError(tag + "discrete probabilities sum to " + std::to_string(sum));
      break;
    }
  }
}

std::string Marginal::kind_name() const {
  switch (kind) {
    case Kind::uniform: return "uniform";
    case Kind::exponential: return "exponential";
    case Kind::lognormal: return "lognormal";
    case Kind::discrete: return "discrete";
  }
  return "?";
}

bool DemandModel::any_discrete() const {
  for (const auto& m : marginals)
    if (m.is_discrete()) return true;
  return false;
}

void DemandModel::validate(int channels) const {
  if (static_cast<int>(marginals.size()) != channels)
    throw ValidationError("demand model must have one marginal per channel (" +
                          std::to_string(channels) + ")");
  for (int j = 0; j < channels; ++j) marginals[static_cast<std::size_t>(j)].validate(j);
  if (dependence == Dependence::empirical) {
    if (empirical_count == 0)
      throw ValidationError("empirical dependence requires at least one joint draw");
    if (empirical_rows.size() != empirical_count * static_cast<std::size_t>(channels))
      throw ValidationError("empirical draw matrix has wrong shape");
    for (double v : empirical_rows)
      if (!(v >= 0.0)) throw ValidationError("empirical draw matrix has a negative entry");
  }
}

std::vector<double> SampleSet::column(std::size_t col) const {
  std::vector<double> out(rows_);
  for (std::size_t t = 0; t < rows_; ++t) out[t] = draws_[t * cols_ + col];
  return out;
}

std::vector<double> draw_row(const DemandModel& model, std::uint64_t seed, std::size_t t) {
  const std::size_t cols = model.marginals.size();
  std::vector<double> row(cols);
  if (model.dependence == DemandModel::Dependence::empirical) {
    const std::size_t idx = cell_bits(seed, t, cols) % model.empirical_count;
    for (std::size_t j = 0; j < cols; ++j) row[j] = model.empirical_rows[idx * cols + j];
    return row;
  }
  for (std::size_t j = 0; j < cols; ++j)
    row[j] = model.marginals[j].sample_from_unit(uniform_cell(seed, t, j));
  return row;
}

SampleSet sample(const DemandModel& model, std::size_t n_draws, std::uint64_t seed) {
  if (n_draws == 0) throw ValidationError("n_draws must be positive");
  const std::size_t cols = model.marginals.size();
  std::vector<double> draws(n_draws * cols);
  if (model.dependence == DemandModel::Dependence::empirical) {
    parallel_for_rows(n_draws, [&](std::size_t begin, std::size_t end) {
      for (std::size_t t = begin; t < end; ++t) {
        const std::size_t idx = cell_bits(seed, t, cols) % model.empirical_count;
        for (std::size_t j = 0; j < cols; ++j)
          draws[t * cols + j] = model.empirical_rows[idx * cols + j];
      }
    });
  } else {
    parallel_for_rows(n_draws, [&](std::size_t begin, std::size_t end) {
      for (std::size_t t = begin; t < end; ++t)
        for (std::size_t j = 0; j < cols; ++j)
          draws[t * cols + j] = model.marginals[j].sample_from_unit(uniform_cell(seed, t, j));
    });
  }
  return SampleSet(std::move(draws), n_draws, cols, seed);
}

std::vector<double> composite_demand(const MarketConfig& cfg, const StockVector& s,
                                     std::span<const double> primary) {
  const std::size_t ch = primary.size();
  std::vector<double> excess(ch), out(ch);
  for (std::size_t k = 0; k < ch; ++k) excess[k] = std::max(primary[k] - s[static_cast<int>(k)], 0.0);
  for (std::size_t j = 0; j < ch; ++j) {
    double spill = 0.0;
    for (std::size_t k = 0; k < ch; ++k) spill += cfg.alpha[k][j] * excess[k];
    out[j] = primary[j] + spill;
  }
  return out;
}

std::vector<double> composite_matrix(const MarketConfig& cfg, const SampleSet& samples,
                                     const StockVector& s) {
  const std::size_t rows = samples.rows();
  const std::size_t ch = samples.cols();
  std::vector<double> out(rows * ch);
  parallel_for_rows(rows, [&](std::size_t begin, std::size_t end) {
    std::vector<double> excess(ch);
    for (std::size_t t = begin; t < end; ++t) {
      const double* p = samples.row_ptr(t);
      for (std::size_t k = 0; k < ch; ++k)
        excess[k] = std::max(p[k] - s[static_cast<int>(k)], 0.0);
      for (std::size_t j = 0; j < ch; ++j) {
        double spill = 0.0;
        for (std::size_t k = 0; k < ch; ++k) spill += cfg.alpha[k][j] * excess[k];
        out[t * ch + j] = p[j] + spill;
      }
    }
  });
  return out;
}

std::vector<double> composite_column(const MarketConfig& cfg, const SampleSet& samples,
                                     const StockVector& s, int channel) {
  const std::size_t rows = samples.rows();
  const std::size_t ch = samples.cols();
  const std::size_t j = static_cast<std::size_t>(channel);
  std::vector<double> out(rows);
  parallel_for_rows(rows, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const double* p = samples.row_ptr(t);
      double spill = 0.0;
      for (std::size_t k = 0; k < ch; ++k) {
        if (k == j) continue;
        spill += cfg.alpha[k][j] * std::max(p[k] - s[static_cast<int>(k)], 0.0);
      }
      out[t] = p[j] + spill;
    }
  });
  return out;
}

StockVector stock_upper_bounds(const MarketConfig& cfg, const SampleSet& samples) {
  const int ch = static_cast<int>(samples.cols());
  const StockVector zero = StockVector::zeros(ch);
  std::vector<double> comp = composite_matrix(cfg, samples, zero);
  StockVector out = StockVector::zeros(ch);
  for (std::size_t t = 0; t < samples.rows(); ++t)
    for (int j = 0; j < ch; ++j)
      out[j] = std::max(out[j], comp[t * static_cast<std::size_t>(ch) + static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace mcinv
