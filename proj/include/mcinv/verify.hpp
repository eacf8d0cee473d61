#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcinv/corpus.hpp"

namespace mcinv {

struct VerifyOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;  ///< base seed; per-scenario seeds are derived from it
};

struct PropertyResult {
  std::string name;
  bool pass = false;
  int checks = 0;    ///< resolvable / evaluated checks
  int failures = 0;
  std::string detail;
  double elapsed_s = 0.0;
};

// Oracle equivalence on random discrete instances.
PropertyResult verify_oracle_nash(const VerifyOptions& opts);
PropertyResult verify_oracle_stackelberg(const VerifyOptions& opts);

// Zero-substitution games decouple into closed-form newsvendor quantiles.
PropertyResult verify_decoupling(const VerifyOptions& opts);

// Own-stock concavity and cross-partial submodularity signs.
PropertyResult verify_curvature_signs(const VerifyOptions& opts);

// Follower response slope stays within [-alpha, 0] up to noise.
PropertyResult verify_slope_band(const VerifyOptions& opts);

// Negative quasi-definiteness at the equilibrium plus bracket coincidence.
PropertyResult verify_uniqueness_route(const VerifyOptions& opts);

// With wholesale prices at cost, the leader stocks at least the
// simultaneous-move level, strictly more in at least half the corpus.
PropertyResult verify_leader_ordering(const VerifyOptions& opts);

// Leading never pays less than the simultaneous game.
PropertyResult verify_leader_dominance(const VerifyOptions& opts);

// Long-run simulated averages match the static profit estimates.
PropertyResult verify_simulator_reduction(const VerifyOptions& opts);

// Analytic gradient against common-random-number finite differences.
PropertyResult verify_gradient_consistency(const VerifyOptions& opts);

// Re-running CLI commands with identical inputs, seeds, and different thread
// counts must reproduce result payloads byte for byte.
PropertyResult verify_cli_determinism(const std::string& cli_path, const VerifyOptions& opts);

/// The property suite behind the CLI `verify` subcommand: curvature signs,
/// slope band, uniqueness route, leader ordering, simulator reduction.
std::vector<PropertyResult> run_property_suite(const VerifyOptions& opts);

}  // namespace mcinv
