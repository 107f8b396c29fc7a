#include <algorithm>
#include <bit>
#include <random>

#include "cellkit/cell_engine.hpp"
#include "cellkit/errors.hpp"
#include "cellkit/group.hpp"
#include "cellkit/parallel.hpp"
#include "cellkit/subset_algebra.hpp"

namespace cellkit {

namespace {

using Word = ElementSet::Word;

void require_cell_inputs(const ElementSet& x, const ElementSet& s, const char* op) {
  if (!x.same_group(s)) throw contract_violation(std::string(op) + ": sets from different groups");
  if (!s.contains_identity())
    throw contract_violation(std::string(op) + ": S must contain the identity (see normalize_s)");
  if (x.empty()) throw contract_violation(std::string(op) + ": empty set is never a cell");
}

// Masks of z*s for every z (narrow groups only).
std::vector<Word> left_translates(const ElementSet& s) {
  const Group& g = s.group();
  std::vector<Word> out(g.order());
  const auto sm = s.mask();
  for (Element z = 0; z < g.order(); ++z) {
    Word m = 0;
    for (auto b = sm; b != 0; b &= b - 1)
      m |= Word{1} << g.mul(z, static_cast<Element>(std::countr_zero(b)));
    out[z] = m;
  }
  return out;
}

// Identity-containing cells with deficiency <= u_max, as masks.
std::vector<Word> identity_cells(const ElementSet& s, std::size_t u_max, unsigned jobs) {
  const Group& g = s.group();
  const std::size_t n = g.order();
  const auto translates = left_translates(s);
  const Word universe = n == 64 ? ~Word{0} : (Word{1} << n) - 1;
  const Word sm = s.mask();
  const Word free = universe & ~sm;

  // Split the free bits: the top `split` of them fan out into tasks, the
  // rest are walked inside each task.
  const int free_bits = std::popcount(free);
  const int split = jobs <= 1 ? 0 : std::min(free_bits, 8);
  Word high = 0;
  {
    Word f = free;
    for (int i = 0; i < free_bits - split; ++i) f &= f - 1;
    high = f;
  }
  const Word low = free & ~high;
  const std::size_t tasks = std::size_t{1} << split;

  std::vector<Word> high_choices;
  high_choices.reserve(tasks);
  for (Word r = 0;;) {
    high_choices.push_back(r);
    r = (r - high) & high;
    if (r == 0) break;
  }

  std::vector<std::vector<Word>> found(high_choices.size());
  parallel_for(high_choices.size(), jobs, [&](std::size_t t) {
    auto& out = found[t];
    for (Word r = 0;;) {
      const Word a = sm | high_choices[t] | r;
      Word x = 0;
      Word image = 0;
      for (std::size_t z = 0; z < n; ++z)
        if ((translates[z] & ~a) == 0) {
          x |= Word{1} << z;
          image |= translates[z];
        }
      // Each cell is visited exactly once, at A = X*S.
      if (image == a) {
        const auto u = static_cast<std::size_t>(std::popcount(a) - std::popcount(x));
        if (u <= u_max) out.push_back(x);
      }
      r = (r - low) & low;
      if (r == 0) break;
    }
  });

  std::vector<Word> all;
  for (auto& v : found) all.insert(all.end(), v.begin(), v.end());
  return all;
}

Word translate_mask(const Group& g, Element by, Word x) {
  Word out = 0;
  for (; x != 0; x &= x - 1) out |= Word{1} << g.mul(by, static_cast<Element>(std::countr_zero(x)));
  return out;
}

std::vector<CellRecord> exhaustive_cells(const ElementSet& s, std::size_t u_max,
                                         const EnumerationOptions& options) {
  const Group& g = s.group();
  if (g.order() > options.order_cap || !g.narrow())
    throw cap_error("exhaustive cell enumeration refused: group " + g.label() + " has order " +
                    std::to_string(g.order()) + " above the enumeration cap " +
                    std::to_string(std::min(options.order_cap, kNarrowOrderCap)));

  const auto base = identity_cells(s, u_max, options.jobs);
  const auto translates = left_translates(s);
  std::vector<CellRecord> out;
  for (Word y : base) {
    const ElementSet ycell = ElementSet::from_mask(g, y);
    const bool subgroup = is_subgroup(ycell);
    for (Element by = 0; by < g.order(); ++by) {
      const Word x = translate_mask(g, by, y);
      // by lies in by*Y; keeping only by = min(X) visits each cell once.
      if (static_cast<Element>(std::countr_zero(x)) != by) continue;
      Word image = 0;
      for (Word b = x; b != 0; b &= b - 1) image |= translates[static_cast<std::size_t>(std::countr_zero(b))];
      CellRecord rec{ElementSet::from_mask(g, x), ElementSet::from_mask(g, image),
                     static_cast<std::size_t>(std::popcount(image) - std::popcount(x)), by == 0,
                     by == 0 && subgroup};
      out.push_back(std::move(rec));
    }
  }
  return out;
}

ElementSet random_nonempty_subset(const Group& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size_dist(1, g.order());
  const std::size_t k = size_dist(rng);
  std::vector<Element> pool(g.order());
  for (Element e = 0; e < g.order(); ++e) pool[e] = e;
  ElementSet out(g);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    out.insert(pool[i]);
  }
  return out;
}

std::vector<CellRecord> sampled_cells(const ElementSet& s, std::size_t u_max, const Sampled& mode) {
  std::mt19937_64 rng(mode.seed);
  std::vector<CellRecord> out;
  for (std::size_t i = 0; i < mode.count; ++i) {
    auto rec = cell_closure(random_nonempty_subset(s.group(), rng), s);
    if (rec.deficiency <= u_max) out.push_back(std::move(rec));
  }
  std::sort(out.begin(), out.end(), cell_order_less);
  out.erase(std::unique(out.begin(), out.end(),
                        [](const CellRecord& a, const CellRecord& b) { return a.cell == b.cell; }),
            out.end());
  return out;
}

}  // namespace

CellRecord make_cell_record(const ElementSet& x, const ElementSet& s) {
  ElementSet image = product(x, s);
  const std::size_t u = image.size() - x.size();
  const bool has_identity = x.contains_identity();
  return {x, std::move(image), u, has_identity, has_identity && is_subgroup(x)};
}

bool cell_order_less(const CellRecord& a, const CellRecord& b) {
  if (a.deficiency != b.deficiency) return a.deficiency < b.deficiency;
  return size_then_mask_less(a.cell, b.cell);
}

bool is_cell(const ElementSet& x, const ElementSet& s) {
  require_cell_inputs(x, s, "is_cell");
  const Group& g = x.group();
  const ElementSet image = product(x, s);
  const auto right = s.elements();
  for (Element z = 0; z < g.order(); ++z) {
    if (x.contains(z)) continue;
    bool inside = true;
    for (Element b : right)
      if (!image.contains(g.mul(z, b))) {
        inside = false;
        break;
      }
    if (inside) return false;
  }
  return true;
}

CellRecord cell_closure(const ElementSet& t, const ElementSet& s) {
  require_cell_inputs(t, s, "cell_closure");
  const Group& g = t.group();
  ElementSet image = product(t, s);
  ElementSet x(g);
  const auto right = s.elements();
  for (Element z = 0; z < g.order(); ++z) {
    bool inside = true;
    for (Element b : right)
      if (!image.contains(g.mul(z, b))) {
        inside = false;
        break;
      }
    if (inside) x.insert(z);
  }
  const std::size_t u = image.size() - x.size();
  const bool has_identity = x.contains_identity();
  const bool subgroup = has_identity && is_subgroup(x);
  return {std::move(x), std::move(image), u, has_identity, subgroup};
}

std::vector<CellRecord> enumerate_cells(const ElementSet& s, std::size_t u_max,
                                        const EnumerationMode& mode,
                                        const EnumerationOptions& options) {
  if (!s.contains_identity())
    throw contract_violation("enumerate_cells: S must contain the identity (see normalize_s)");
  std::vector<CellRecord> out;
  if (const auto* sampled = std::get_if<Sampled>(&mode)) {
    out = sampled_cells(s, u_max, *sampled);
  } else {
    out = exhaustive_cells(s, u_max, options);
    std::sort(out.begin(), out.end(), cell_order_less);
  }
  return out;
}

NormalizedSet normalize_s(const ElementSet& s) {
  if (s.empty()) throw contract_violation("normalize_s of the empty set");
  const Element shift = s.min_element();
  return {right_translate(s, s.group().inv(shift)), shift};
}

}  // namespace cellkit
