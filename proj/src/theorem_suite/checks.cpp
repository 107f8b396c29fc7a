#include <algorithm>

#include "cellkit/errors.hpp"
#include "cellkit/subset_algebra.hpp"
#include "cellkit/theorem_suite.hpp"

namespace cellkit {

namespace {

using i64 = std::int64_t;

i64 card(const ElementSet& s) { return static_cast<i64>(s.size()); }

TheoremVerdict start(TheoremId id, const Group& g, std::vector<NamedSet> instance) {
  TheoremVerdict v;
  v.theorem = id;
  v.group = g.label();
  v.instance = std::move(instance);
  return v;
}

TheoremVerdict& not_applicable(TheoremVerdict& v, std::string hypothesis) {
  v.status = Status::not_applicable;
  v.hypothesis = std::move(hypothesis);
  return v;
}

TheoremVerdict& fail(TheoremVerdict& v, bool exploring, Witness w) {
  v.status = exploring ? Status::finding : Status::violated;
  v.witness = std::move(w);
  return v;
}

void require_nonempty(const ElementSet& a, const char* what) {
  if (a.empty()) throw contract_violation(std::string(what) + " must be nonempty");
}

void require_same_group(const ElementSet& a, const ElementSet& b) {
  if (!a.same_group(b)) throw contract_violation("element sets from different groups");
}

// Recomputes product and deficiency for each engine-supplied cell with
// deficiency <= u_max; the verifier trusts only membership of the list.
std::vector<CellRecord> recompute(const ElementSet& s, std::span<const CellRecord> cells,
                                  std::size_t u_max) {
  std::vector<CellRecord> out;
  for (const auto& c : cells) {
    auto rec = make_cell_record(c.cell, s);
    if (rec.deficiency <= u_max) out.push_back(std::move(rec));
  }
  return out;
}

// Minimal-cardinality cells per deficiency, from a recomputed list.
std::map<std::size_t, std::vector<const CellRecord*>> kernels_by_u(
    const std::vector<CellRecord>& cells) {
  std::map<std::size_t, std::size_t> min_size;
  for (const auto& c : cells) {
    auto [it, inserted] = min_size.emplace(c.deficiency, c.cell.size());
    if (!inserted) it->second = std::min(it->second, c.cell.size());
  }
  std::map<std::size_t, std::vector<const CellRecord*>> out;
  for (const auto& c : cells)
    if (c.cell.size() == min_size[c.deficiency]) out[c.deficiency].push_back(&c);
  return out;
}

std::size_t extending_elements(const ElementSet& x, const ElementSet& s) {
  const Group& g = x.group();
  const ElementSet image = product(x, s);
  std::size_t n = 0;
  for (Element z = 0; z < g.order(); ++z)
    if (!x.contains(z) && left_translate(z, s).is_subset_of(image)) ++n;
  return n;
}

}  // namespace

TheoremVerdict check_kneser(const ElementSet& x, const ElementSet& y, NonAbelianPolicy policy) {
  require_same_group(x, y);
  require_nonempty(x, "X");
  require_nonempty(y, "Y");
  const Group& g = x.group();
  auto v = start(TheoremId::kneser, g, {{"X", x}, {"Y", y}});
  const bool exploring = !is_abelian(g);
  if (exploring && policy == NonAbelianPolicy::not_applicable)
    return not_applicable(v, "group not abelian");

  const ElementSet xy = product(x, y);
  if (card(xy) > card(x) + card(y) - 2)
    return not_applicable(v, "hypothesis |XY| <= |X|+|Y|-2 not met");

  const ElementSet h = left_stabilizer(xy).stabilizer;
  const i64 lhs = card(xy);
  const i64 rhs = card(product(h, x)) + card(product(h, y)) - card(h);
  if (lhs == rhs && h.size() > 1) {
    v.status = Status::holds;
    return v;
  }
  return fail(v, exploring,
              {"|XY| = |HX|+|HY|-|H| with H = Stab(XY) nontrivial", lhs, rhs,
               {{"H", h}, {"XY", xy}},
               h.size() > 1 ? "" : "stabilizer of XY is trivial"});
}

TheoremVerdict check_olson(const ElementSet& x, const ElementSet& y, const ElementSet& h,
                           const ElementSet& k) {
  require_same_group(x, y);
  require_same_group(x, h);
  require_same_group(x, k);
  if (!is_subgroup(h)) throw contract_violation("check_olson: H = " + h.to_string() + " is not a subgroup");
  if (!is_subgroup(k)) throw contract_violation("check_olson: K = " + k.to_string() + " is not a subgroup");
  const Group& g = x.group();
  auto v = start(TheoremId::olson, g, {{"X", x}, {"Y", y}, {"H", h}, {"K", k}});

  if (!(product(h, x) == x)) return not_applicable(v, "hypothesis HX = X not met");
  if (!(product(k, y) == y)) return not_applicable(v, "hypothesis KY = Y not met");
  if (product(k, x) == x) return not_applicable(v, "hypothesis KX != X not met");
  if (product(h, y) == y) return not_applicable(v, "hypothesis HY != Y not met");

  const auto [x_minus_y, y_minus_x] = difference_counts(x, y);
  const i64 hk = card(h & k);
  const i64 lhs = static_cast<i64>(x_minus_y + y_minus_x);
  const i64 rhs = card(h) + card(k) - 2 * hk;
  if (lhs < rhs)
    return fail(v, false,
                {"|X\\Y| + |Y\\X| >= |H|+|K|-2|H&K|", lhs, rhs, {{"H&K", h & k}}, ""});

  const bool left = static_cast<i64>(x_minus_y) >= card(h) - hk;
  const bool right = static_cast<i64>(y_minus_x) >= card(k) - hk;
  if (!left && !right)
    return fail(v, false,
                {"|X\\Y| >= |H|-|H&K| or |Y\\X| >= |K|-|H&K|", static_cast<i64>(x_minus_y),
                 card(h) - hk, {{"H&K", h & k}},
                 "|Y\\X| = " + std::to_string(y_minus_x) + " < " + std::to_string(card(k) - hk)});
  v.status = Status::holds;
  return v;
}

TheoremVerdict check_cell_intersection(const ElementSet& s, const ElementSet& m1,
                                       const ElementSet& m2) {
  require_same_group(s, m1);
  require_same_group(s, m2);
  auto v = start(TheoremId::cell_intersect, s.group(), {{"S", s}, {"M1", m1}, {"M2", m2}});
  if (!s.contains_identity()) return not_applicable(v, "identity not in S");
  if (m1.empty() || !is_cell(m1, s)) return not_applicable(v, "M1 is not a cell of S");
  if (m2.empty() || !is_cell(m2, s)) return not_applicable(v, "M2 is not a cell of S");
  const ElementSet meet = m1 & m2;
  if (meet.empty()) return not_applicable(v, "M1 & M2 is empty");
  const auto extra = extending_elements(meet, s);
  if (extra == 0) {
    v.status = Status::holds;
    return v;
  }
  return fail(v, false,
              {"#{z outside M1&M2 : zS within (M1&M2)S} = 0", static_cast<i64>(extra), 0,
               {{"M1&M2", meet}}, ""});
}

TheoremVerdict check_theorem_subgroup_kernels(const ElementSet& s,
                                              std::span<const CellRecord> cells) {
  auto v = start(TheoremId::subgroup_kernel_chain, s.group(), {{"S", s}});
  if (!s.contains_identity()) return not_applicable(v, "identity not in S");
  const std::size_t bound = s.size() - 1;
  const auto recomputed = recompute(s, cells, bound);
  const auto kernels = kernels_by_u(recomputed);

  struct Kernel {
    std::size_t u;
    const CellRecord* rec;
  };
  std::vector<Kernel> subgroup_kernels;
  for (const auto& [u, list] : kernels)
    for (const auto* k : list)
      if (k->is_subgroup) subgroup_kernels.push_back({u, k});

  auto is_v_kernel = [&](const CellRecord& n) {
    const auto it = kernels.find(n.deficiency);
    return it != kernels.end() &&
           std::any_of(it->second.begin(), it->second.end(),
                       [&](const CellRecord* k) { return k->cell == n.cell; });
  };

  for (const auto& m : subgroup_kernels) {
    for (const auto& n : recomputed) {
      if (!n.is_subgroup) continue;
      const std::size_t u = m.u;
      const std::size_t vdef = n.deficiency;
      const bool n_kernel = is_v_kernel(n);
      const bool m_in_n = m.rec->cell.is_subset_of(n.cell);
      const bool n_in_m = n.cell.is_subset_of(m.rec->cell);
      std::string broken;
      if ((n_kernel || u == vdef) && !m_in_n && !n_in_m)
        broken = "(i): M and N incomparable";
      else if (n_kernel && vdef <= u && !m_in_n)
        broken = "(ii): v <= u but M not within N";
      if (broken.empty()) continue;
      Witness w{"|M \\ N| = 0", card(m.rec->cell - n.cell), 0,
                {{"M", m.rec->cell}, {"N", n.cell}},
                broken + " (u=" + std::to_string(u) + ", v=" + std::to_string(vdef) + ")"};
      return fail(v, false, std::move(w));
    }
  }
  v.status = Status::holds;
  return v;
}

TheoremVerdict check_theorem_subgroup_kernels(const ElementSet& s) {
  if (!s.contains_identity()) return check_theorem_subgroup_kernels(s, {});
  const auto cells = enumerate_cells(s, s.size() - 1);
  return check_theorem_subgroup_kernels(s, cells);
}

std::array<TheoremVerdict, 3> check_corollary_kernel_structure(const ElementSet& s,
                                                               std::span<const CellRecord> cells,
                                                               NonAbelianPolicy policy) {
  const Group& g = s.group();
  std::array<TheoremVerdict, 3> out = {start(TheoremId::corollary_i, g, {{"S", s}}),
                                       start(TheoremId::corollary_ii, g, {{"S", s}}),
                                       start(TheoremId::corollary_iii, g, {{"S", s}})};
  auto all_na = [&](const std::string& why) {
    for (auto& v : out) not_applicable(v, why);
    return out;
  };
  const bool exploring = !is_abelian(g);
  if (exploring && policy == NonAbelianPolicy::not_applicable) return all_na("group not abelian");
  if (!s.contains_identity()) return all_na("identity not in S");
  if (s.size() < 3) return all_na("u-range 1 <= u <= |S|-2 is empty");

  const std::size_t top = s.size() - 2;
  const auto recomputed = recompute(s, cells, top);
  const auto kernels = kernels_by_u(recomputed);

  std::map<std::size_t, std::vector<const CellRecord*>> identity_kernels;
  for (const auto& [u, list] : kernels) {
    if (u < 1) continue;
    for (const auto* k : list)
      if (k->contains_identity) identity_kernels[u].push_back(k);
  }
  if (identity_kernels.empty()) return all_na("no u-cell with 1 <= u <= |S|-2");

  for (auto& v : out) v.status = Status::holds;
  auto& part_i = out[0];
  auto& part_ii = out[1];
  auto& part_iii = out[2];

  for (const auto& [u, ids] : identity_kernels) {
    const auto ustr = " at u=" + std::to_string(u);
    if (ids.size() != 1 && part_i.status == Status::holds) {
      std::vector<NamedSet> sets;
      for (const auto* k : ids) sets.push_back({"M", k->cell});
      fail(part_i, exploring,
           {"number of identity u-kernels = 1", static_cast<i64>(ids.size()), 1, std::move(sets),
            "identity kernel not unique" + ustr});
    }
    const CellRecord& m = *ids.front();
    if (!m.is_subgroup && part_i.status == Status::holds)
      fail(part_i, exploring,
           {"M is a subgroup", 0, 1, {{"M", m.cell}}, "identity kernel is not a subgroup" + ustr});

    if (part_ii.status == Status::holds) {
      for (const auto& x : recomputed) {
        if (x.deficiency != u) continue;
        const ElementSet mx = product(m.cell, x.cell);
        if (!(mx == x.cell)) {
          fail(part_ii, exploring,
               {"|MX| = |X|", card(mx), card(x.cell), {{"M", m.cell}, {"X", x.cell}},
                "u-cell not M-periodic" + ustr});
          break;
        }
      }
    }

    if (part_iii.status == Status::holds) {
      for (const auto& [v, nids] : identity_kernels) {
        if (v <= u) continue;
        for (const auto* n : nids) {
          const bool proper = n->cell.is_subset_of(m.cell) && n->cell.size() < m.cell.size();
          if (!n->is_subgroup || !proper) {
            fail(part_iii, exploring,
                 {"N is a proper subgroup of M", card(n->cell - m.cell), 0,
                  {{"M", m.cell}, {"N", n->cell}},
                  (n->is_subgroup ? std::string("v-kernel not properly inside M")
                                  : std::string("v-kernel is not a subgroup")) +
                      ustr + ", v=" + std::to_string(v)});
            break;
          }
        }
        if (part_iii.status != Status::holds) break;
      }
    }
  }
  return out;
}

std::array<TheoremVerdict, 3> check_corollary_kernel_structure(const ElementSet& s,
                                                               NonAbelianPolicy policy) {
  if (!s.contains_identity() || s.size() < 3) return check_corollary_kernel_structure(s, {}, policy);
  const auto cells = enumerate_cells(s, s.size() - 2);
  return check_corollary_kernel_structure(s, cells, policy);
}

DichotomyChecker::DichotomyChecker(ElementSet s, ElementSet h, NonAbelianPolicy policy)
    : s_(std::move(s)), h_(std::move(h)), hs_(s_.group()), exploring_(!is_abelian(s_.group())) {
  require_same_group(s_, h_);
  require_nonempty(s_, "S");
  if (exploring_ && policy == NonAbelianPolicy::not_applicable)
    refusal_ = "group not abelian";
  else if (!is_subgroup(h_))
    refusal_ = "H is not a subgroup";
  else
    hs_ = product(h_, s_);
}

TheoremVerdict DichotomyChecker::operator()(const ElementSet& t) const {
  require_same_group(s_, t);
  require_nonempty(t, "T");
  auto v = start(TheoremId::dichotomy, s_.group(), {{"S", s_}, {"H", h_}, {"T", t}});
  if (!refusal_.empty()) return not_applicable(v, refusal_);

  const ElementSet ts = product(t, s_);
  if (card(ts) >= card(t) + card(s_) - 1) {
    v.status = Status::holds;
    return v;
  }
  const ElementSet hts = product(h_, ts);
  if (!(hts == ts))
    return fail(v, exploring_,
                {"|HTS| = |TS|", card(hts), card(ts), {{"TS", ts}},
                 "|TS| < |T|+|S|-1 and TS is not H-periodic"});
  const i64 bound = card(hs_) + card(product(h_, t)) - card(h_);
  if (card(ts) > bound)
    return fail(v, exploring_,
                {"|TS| <= |HS|+|HT|-|H|", card(ts), bound, {{"TS", ts}},
                 "|TS| < |T|+|S|-1 and the coset bound fails"});
  v.status = Status::holds;
  return v;
}

TheoremVerdict check_dichotomy(const ElementSet& s, const ElementSet& h, const ElementSet& t,
                               NonAbelianPolicy policy) {
  return DichotomyChecker(s, h, policy)(t);
}

}  // namespace cellkit
