#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>

#include "fdpc/scenario.hpp"

namespace fdpc {

struct Role {
  enum class Kind { bs, uplink, downlink };
  Kind kind = Kind::bs;
  std::size_t index = 0;  // unused for bs

  static Role bs() { return {Kind::bs, 0}; }
  static Role uplink(std::size_t i) { return {Kind::uplink, i}; }
  static Role downlink(std::size_t j) { return {Kind::downlink, j}; }

  auto operator<=>(const Role&) const = default;
};

std::string to_string(const Role& role);

enum class FactKind {
  dl_gain,        // g_dl[j]
  dl_power,       // p_dl[j]
  dl_price,       // q_dl[j]
  dl_sinr,        // SINR_dl[j]
  dl_budget,      // P_dl_tot and P0_dl
  ul_power,       // p_ul[i]
  ul_price,       // q_ul[i]
  ul_sinr,        // SINR_ul[i]
  ul_bounds,      // P0_ul[i], P_ul_max
  inter_gain,     // g_I(i, j)
  metric,         // m_ij
  interference,   // IN_j
};

/// A fact about uplink user `ul` and/or downlink user `dl`; npos marks an
/// unused coordinate.
struct FactRef {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  FactKind kind;
  std::size_t ul = npos;
  std::size_t dl = npos;

  auto operator<=>(const FactRef&) const = default;
};

std::string to_string(const FactRef& fact);

class AccessViolation : public std::runtime_error {
 public:
  AccessViolation(Role agent, FactRef fact);
  const Role& agent() const { return agent_; }
  const FactRef& fact() const { return fact_; }

 private:
  Role agent_;
  FactRef fact_;
};

/// Facts an agent may hold under the one-hop architecture:
///   bs          g_dl, p_dl, q_dl, recovered SINR_dl of every downlink user,
///               and the downlink power limits;
///   uplink i    own power, price, SINR and limits; g_I(i, j) and m_ij for
///               j in N_i;
///   downlink j  own IN_j, price and SINR.
/// Every read is checked and recorded.
class KnowledgeTable {
 public:
  KnowledgeTable(Role role, const Scenario& s) : role_(role), s_(&s) {}

  const Role& role() const { return role_; }
  bool permits(const FactRef& fact) const;

  /// Throws AccessViolation when not permitted.
  void read(const FactRef& fact);

  const std::set<FactRef>& read_set() const { return reads_; }

 private:
  Role role_;
  const Scenario* s_;
  std::set<FactRef> reads_;
};

}  // namespace fdpc
