// Acceptance suite: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.
//
// Usage: mcinv_acceptance [--cli <path-to-mcinv-binary>] [--seed S] [--samples N]

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "mcinv/verify.hpp"

int main(int argc, char** argv) {
  std::string cli_path;
  std::string only;
  mcinv::VerifyOptions opts;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--cli") == 0 && i + 1 < argc) {
      cli_path = argv[++i];
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      opts.seed = std::stoull(argv[++i]);
    } else if (std::strcmp(argv[i], "--samples") == 0 && i + 1 < argc) {
      opts.samples = std::stoull(argv[++i]);
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::cerr << "unknown argument: " << argv[i] << "\n";
      return 2;
    }
  }

  using mcinv::PropertyResult;
  const auto wanted = [&only](const char* name) {
    return only.empty() || only == name;
  };
  std::vector<PropertyResult> results;
  if (wanted("oracle-nash")) results.push_back(mcinv::verify_oracle_nash(opts));
  if (wanted("oracle-stackelberg")) results.push_back(mcinv::verify_oracle_stackelberg(opts));
  if (wanted("decoupling")) results.push_back(mcinv::verify_decoupling(opts));
  if (wanted("curvature")) results.push_back(mcinv::verify_curvature_signs(opts));
  if (wanted("slope")) results.push_back(mcinv::verify_slope_band(opts));
  if (wanted("uniqueness")) results.push_back(mcinv::verify_uniqueness_route(opts));
  if (wanted("ordering")) results.push_back(mcinv::verify_leader_ordering(opts));
  if (wanted("dominance")) results.push_back(mcinv::verify_leader_dominance(opts));
  if (wanted("reduction")) results.push_back(mcinv::verify_simulator_reduction(opts));
  if (wanted("gradient")) results.push_back(mcinv::verify_gradient_consistency(opts));
  if (wanted("determinism")) {
    if (!cli_path.empty()) {
      results.push_back(mcinv::verify_cli_determinism(cli_path, opts));
    } else if (only == "determinism") {
      PropertyResult skipped;
      skipped.name = "cli-determinism";
      skipped.pass = false;
      skipped.detail = "skipped: pass --cli <path>";
      results.push_back(skipped);
    }
  }
  if (only.empty() && cli_path.empty()) {
    PropertyResult skipped;
    skipped.name = "cli-determinism";
    skipped.pass = false;
    skipped.detail = "skipped: pass --cli <path>";
    results.push_back(skipped);
  }

  bool all_pass = true;
  int index = 1;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << index++ << ". " << r.name << " — "
              << r.detail << " (" << static_cast<int>(r.elapsed_s + 0.5) << "s)\n";
    all_pass = all_pass && r.pass;
  }
  std::cout << (all_pass ? "acceptance: all criteria passed\n"
                         : "acceptance: FAILURES present\n");
  return all_pass ? 0 : 1;
}
