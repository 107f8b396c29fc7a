#include "cellkit/theorem_suite.hpp"

namespace cellkit {

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::kneser: return "KNESER";
    case TheoremId::olson: return "OLSON";
    case TheoremId::cell_intersect: return "CELL_INTERSECT";
    case TheoremId::subgroup_kernel_chain: return "SUBGROUP_KERNEL_CHAIN";
    case TheoremId::corollary_i: return "COROLLARY_I";
    case TheoremId::corollary_ii: return "COROLLARY_II";
    case TheoremId::corollary_iii: return "COROLLARY_III";
    case TheoremId::dichotomy: return "DICHOTOMY";
  }
  return "UNKNOWN";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::holds: return "HOLDS";
    case Status::violated: return "VIOLATED";
    case Status::not_applicable: return "NOT_APPLICABLE";
    case Status::finding: return "FINDING";
  }
  return "UNKNOWN";
}

std::optional<TheoremId> theorem_from_string(std::string_view name) {
  for (auto id : kAllTheorems)
    if (to_string(id) == name) return id;
  return std::nullopt;
}

bool abelian_only(TheoremId id) {
  switch (id) {
    case TheoremId::kneser:
    case TheoremId::corollary_i:
    case TheoremId::corollary_ii:
    case TheoremId::corollary_iii:
    case TheoremId::dichotomy:
      return true;
    default:
      return false;
  }
}

void VerdictCounts::add(Status s) {
  switch (s) {
    case Status::holds: ++holds; break;
    case Status::violated: ++violated; break;
    case Status::not_applicable: ++not_applicable; break;
    case Status::finding: ++findings; break;
  }
}

std::size_t SweepSummary::violated() const {
  std::size_t n = 0;
  for (const auto& [id, c] : per_theorem) n += c.violated;
  return n;
}

}  // namespace cellkit
