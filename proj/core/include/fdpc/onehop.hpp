#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "fdpc/distpc.hpp"
#include "fdpc/feedback.hpp"
#include "fdpc/knowledge.hpp"

namespace fdpc {

struct GuardOptions {
  /// (agent, other): uplink agent `agent` additionally tries to read the
  /// metric of uplink user `other`. Used to exercise the guard.
  std::optional<std::pair<std::size_t, std::size_t>> two_hop_probe;
};

struct GuardStats {
  std::vector<std::size_t> messages_per_round;
  /// Dynamic scalars on the air per round (one fb per message).
  std::vector<std::size_t> payload_scalars_per_round;
  std::size_t wire_bytes_per_round = 0;
  std::size_t violations = 0;
  std::map<Role, std::set<FactRef>> read_sets;
};

struct GuardedRun {
  AlgoState state;
  GuardStats stats;
};

/// The distributed loop executed by separate base-station, uplink and
/// downlink agents. Cross-node quantities travel only in FeedbackMsg values
/// and every agent read goes through its KnowledgeTable. The BS keeps its own
/// downlink prices, updated from SINRs recovered from feedback.
///
/// Throws AccessViolation on the first forbidden read.
GuardedRun run_guarded(const Scenario& s, const Utilities& utils, const AlgoParams& params,
                       const OracleResult* oracle = nullptr, const GuardOptions& options = {});

struct Overhead {
  std::size_t centralized_link_items = 0;          // K_ul + K_dl
  std::size_t centralized_interference_items = 0;  // sum_i |N_i|
  std::size_t centralized_items = 0;               // both
  std::size_t onehop_bs_items_per_round = 0;       // one fb per downlink user
  std::vector<std::size_t> onehop_ul_items;        // |N_i| metrics at uplink i
};

Overhead overhead_accounting(const Neighborhoods& nbr);
Overhead overhead_accounting(const Scenario& s);

}  // namespace fdpc
