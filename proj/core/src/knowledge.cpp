#include "fdpc/knowledge.hpp"

#include <algorithm>

namespace fdpc {

std::string to_string(const Role& role) {
  switch (role.kind) {
    case Role::Kind::bs: return "bs";
    case Role::Kind::uplink: return "uplink(" + std::to_string(role.index) + ")";
    case Role::Kind::downlink: return "downlink(" + std::to_string(role.index) + ")";
  }
  return "?";
}

std::string to_string(const FactRef& fact) {
  static const char* const names[] = {"dl_gain", "dl_power", "dl_price",  "dl_sinr",
                                      "dl_budget", "ul_power", "ul_price", "ul_sinr",
                                      "ul_bounds", "inter_gain", "metric", "interference"};
  std::string out = names[static_cast<int>(fact.kind)];
  out += '[';
  if (fact.ul != FactRef::npos) out += "ul=" + std::to_string(fact.ul);
  if (fact.ul != FactRef::npos && fact.dl != FactRef::npos) out += ',';
  if (fact.dl != FactRef::npos) out += "dl=" + std::to_string(fact.dl);
  out += ']';
  return out;
}

AccessViolation::AccessViolation(Role agent, FactRef fact)
    : std::runtime_error("access violation: " + to_string(agent) + " read " + to_string(fact)),
      agent_(agent),
      fact_(fact) {}

bool KnowledgeTable::permits(const FactRef& f) const {
  const std::size_t kul = s_->num_ul();
  const std::size_t kdl = s_->num_dl();
  switch (role_.kind) {
    case Role::Kind::bs:
      switch (f.kind) {
        case FactKind::dl_gain:
        case FactKind::dl_power:
        case FactKind::dl_price:
        case FactKind::dl_sinr:
          return f.ul == FactRef::npos && f.dl < kdl;
        case FactKind::dl_budget:
          return f.ul == FactRef::npos && f.dl == FactRef::npos;
        default:
          return false;
      }
    case Role::Kind::uplink: {
      const std::size_t i = role_.index;
      switch (f.kind) {
        case FactKind::ul_power:
        case FactKind::ul_price:
        case FactKind::ul_sinr:
        case FactKind::ul_bounds:
          return f.ul == i && f.dl == FactRef::npos;
        case FactKind::inter_gain:
        case FactKind::metric: {
          if (f.ul != i || i >= kul || f.dl >= kdl) return false;
          const auto& nb = s_->nbr.of_ul[i];
          return std::binary_search(nb.begin(), nb.end(), f.dl);
        }
        default:
          return false;
      }
    }
    case Role::Kind::downlink: {
      const std::size_t j = role_.index;
      switch (f.kind) {
        case FactKind::interference:
        case FactKind::dl_price:
        case FactKind::dl_sinr:
          return f.dl == j && f.ul == FactRef::npos;
        default:
          return false;
      }
    }
  }
  return false;
}

void KnowledgeTable::read(const FactRef& fact) {
  if (!permits(fact)) throw AccessViolation(role_, fact);
  reads_.insert(fact);
}

}  // namespace fdpc
