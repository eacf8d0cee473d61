#pragma once

#include <cstdint>

namespace mcinv {

// Stateless counter-based uniform generator. Every variate is a pure
// function of (seed, row, column), so draws are reproducible bit-for-bit
// no matter how the sample matrix is filled or parallelized.

/// 64-bit finalizer with full avalanche (splitmix64 step).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Keyed counter hash for one (seed, row, column) cell.
inline std::uint64_t cell_bits(std::uint64_t seed, std::uint64_t row, std::uint64_t col) {
  std::uint64_t h = mix64(seed ^ 0x8f1bbcdcbfa53e0bULL);
  h = mix64(h ^ row);
  h = mix64(h ^ (col + 0xd6e8feb86659fd93ULL));
  return h;
}

/// Maps 64 random bits to the open interval (0, 1).
inline double bits_to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform(0,1) variate for cell (seed, row, col), endpoints excluded.
inline double uniform_cell(std::uint64_t seed, std::uint64_t row, std::uint64_t col) {
  return bits_to_unit(cell_bits(seed, row, col));
}

/// Inverse standard normal CDF (Acklam's rational approximation,
/// relative error below 1.2e-9 over (0,1)).
double inverse_normal_cdf(double p);

}  // namespace mcinv
