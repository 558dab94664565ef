#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fdpc/scenario.hpp"

namespace fdpc {

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;  // the measured quantity compared against the limit
  double limit = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Check> checks;
  /// (file name, contents) produced by the suite; identical for equal seeds.
  std::vector<std::pair<std::string, std::string>> files;

  bool all_passed() const;
};

/// Feasible point drawn uniformly in log uplink power and on a random
/// downlink split with total in (P0 sum, P_tot].
PowerAllocation random_feasible_point(const Scenario& s, std::uint64_t seed, std::uint64_t draw);

/// Runs the property suite: gradient and concavity checks, oracle
/// certificates and symmetry, distributed-loop optimality and invariances,
/// one-hop equivalence, codec round trip, experiment invariants.
ValidationReport run_validation(std::uint64_t seed);

}  // namespace fdpc
