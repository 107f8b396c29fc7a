#include <algorithm>

#include "cellkit/cell_engine.hpp"
#include "cellkit/errors.hpp"
#include "cellkit/group.hpp"

namespace cellkit {

KernelRecord kernels_at(const ElementSet& s, std::size_t u, std::span<const CellRecord> cells) {
  KernelRecord rec;
  rec.u = u;
  std::size_t min_size = s.group().order() + 1;
  for (const auto& c : cells)
    if (c.deficiency == u) min_size = std::min(min_size, c.cell.size());
  for (const auto& c : cells)
    if (c.deficiency == u && c.cell.size() == min_size) rec.kernels.push_back(c);
  std::sort(rec.kernels.begin(), rec.kernels.end(), cell_order_less);

  for (const auto& k : rec.kernels)
    if (k.contains_identity) {
      ++rec.identity_kernel_count;
      rec.unique_identity_kernel = k;
    }
  if (rec.identity_kernel_count != 1) rec.unique_identity_kernel.reset();
  return rec;
}

BalandraudResult balandraud_analysis(const ElementSet& s, std::span<const CellRecord> cells) {
  if (!s.contains_identity())
    throw contract_violation("balandraud_analysis: S must contain the identity (see normalize_s)");
  const Group& g = s.group();
  const std::size_t n = s.size();

  BalandraudResult out{g.singleton(g.identity()), {}, {}, 0, false};
  if (n <= 1) {
    out.branch = BalandraudBranch::trivial;
    return out;
  }

  std::optional<std::size_t> u_star;
  for (std::size_t u = n - 2; u >= 1; --u) {
    const bool found = std::any_of(cells.begin(), cells.end(),
                                   [u](const CellRecord& c) { return c.deficiency == u; });
    if (found) {
      u_star = u;
      break;
    }
  }

  if (!u_star) {
    // No cell with deficiency in [1, |S|-2]; in a finite group T = G always
    // meets |TS| <= |T|+|S|-2 once |S| >= 2.
    out.branch = BalandraudBranch::generated;
    out.subgroup = generated_subgroup(s);
    return out;
  }

  const KernelRecord kernels = kernels_at(s, *u_star, cells);
  out.branch = BalandraudBranch::kernel;
  out.u_star = u_star;
  out.identity_kernel_count = kernels.identity_kernel_count;
  if (kernels.unique_identity_kernel) {
    out.subgroup = kernels.unique_identity_kernel->cell;
    return out;
  }
  // Left translates of a kernel are kernels, so some kernel contains the
  // identity whenever the cell list is complete.
  const auto it = std::find_if(kernels.kernels.begin(), kernels.kernels.end(),
                               [](const CellRecord& c) { return c.contains_identity; });
  if (it == kernels.kernels.end())
    throw contract_violation("balandraud_analysis: cell list has no identity kernel at u = " +
                             std::to_string(*u_star) + "; enumeration incomplete");
  out.subgroup = it->cell;
  out.uniqueness_violation = is_abelian(g);
  return out;
}

BalandraudResult balandraud_analysis(const ElementSet& s, const EnumerationOptions& options) {
  const std::size_t u_max = s.size() >= 2 ? s.size() - 2 : 0;
  const auto cells = enumerate_cells(s, u_max, Exhaustive{}, options);
  return balandraud_analysis(s, cells);
}

ElementSet balandraud_subgroup(const ElementSet& s) { return balandraud_analysis(s).subgroup; }

KernelChainReport kernel_chain(const ElementSet& s, std::span<const CellRecord> cells) {
  if (!s.contains_identity())
    throw contract_violation("kernel_chain: S must contain the identity (see normalize_s)");
  KernelChainReport report{s, {}, {}, true, {}};

  struct Entry {
    std::size_t u;
    ElementSet set;
  };
  std::vector<Entry> subgroup_kernels;
  for (std::size_t u = 0; u < s.size(); ++u) {
    auto rec = kernels_at(s, u, cells);
    for (const auto& k : rec.kernels)
      if (k.is_subgroup) subgroup_kernels.push_back({u, k.cell});
    report.per_u.emplace(u, std::move(rec));
  }

  for (std::size_t i = 0; i < subgroup_kernels.size(); ++i)
    for (std::size_t j = i + 1; j < subgroup_kernels.size(); ++j) {
      const auto& a = subgroup_kernels[i];
      const auto& b = subgroup_kernels[j];
      const bool a_in_b = a.set.is_subset_of(b.set);
      const bool b_in_a = b.set.is_subset_of(a.set);
      if (!a_in_b && !b_in_a) {
        report.violations.push_back({a.u, b.u, a.set, b.set, "incomparable subgroup kernels"});
      } else if (a.u == b.u) {
        // Entries are distinct sets, so one strictly contains the other.
        report.violations.push_back({a.u, b.u, a.set, b.set, "two subgroup kernels at the same u"});
      } else if (a.u < b.u && !b_in_a) {
        report.violations.push_back(
            {b.u, a.u, b.set, a.set, "kernel at larger u not contained in kernel at smaller u"});
      } else if (b.u < a.u && !a_in_b) {
        report.violations.push_back(
            {a.u, b.u, a.set, b.set, "kernel at larger u not contained in kernel at smaller u"});
      }
    }
  report.chain_ok = report.violations.empty();

  for (auto& e : subgroup_kernels) report.subgroup_kernel_chain.push_back(std::move(e.set));
  std::sort(report.subgroup_kernel_chain.begin(), report.subgroup_kernel_chain.end(),
            size_then_mask_less);
  return report;
}

KernelChainReport kernel_chain(const ElementSet& s, const EnumerationOptions& options) {
  const auto cells = enumerate_cells(s, s.size() - 1, Exhaustive{}, options);
  return kernel_chain(s, cells);
}

}  // namespace cellkit
