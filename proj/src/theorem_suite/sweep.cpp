#include <algorithm>
#include <random>

#include "cellkit/errors.hpp"
#include "cellkit/hash.hpp"
#include "cellkit/parallel.hpp"
#include "cellkit/subset_algebra.hpp"
#include "cellkit/theorem_suite.hpp"

namespace cellkit {

namespace {

using Word = ElementSet::Word;

// Instances are checked in batches of this many tasks per worker, then
// emitted in task order.
constexpr std::size_t kBatchPerJob = 16;
constexpr std::size_t kSamplesPerTask = 4096;

bool selected(const SweepConfig& c, TheoremId id) {
  return std::find(c.theorems.begin(), c.theorems.end(), id) != c.theorems.end();
}

std::mt19937_64 seeded_rng(std::uint64_t seed, std::string_view label, std::uint64_t salt,
                           std::uint64_t extra = 0) {
  const std::uint64_t h = fnv1a_word(extra, fnv1a_word(salt, fnv1a(label)));
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

// Uniform random subset of `pool` with a size drawn uniformly from [lo, hi].
std::vector<Element> random_subset(std::vector<Element> pool, std::size_t lo, std::size_t hi,
                                   std::mt19937_64& rng) {
  hi = std::min(hi, pool.size());
  std::uniform_int_distribution<std::size_t> size_dist(lo, hi);
  const std::size_t k = size_dist(rng);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

ElementSet random_nonempty(const Group& g, std::mt19937_64& rng) {
  std::vector<Element> all(g.order());
  for (Element e = 0; e < g.order(); ++e) all[e] = e;
  const auto picked = random_subset(std::move(all), 1, g.order(), rng);
  return ElementSet(g, picked);
}

// Nonempty union of randomly chosen blocks.
ElementSet random_union(const Group& g, const std::vector<ElementSet>& blocks, std::mt19937_64& rng) {
  std::vector<Element> idx(blocks.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Element>(i);
  ElementSet out(g);
  for (auto i : random_subset(std::move(idx), 1, blocks.size(), rng)) out |= blocks[i];
  return out;
}

ElementSet union_by_mask(const Group& g, const std::vector<ElementSet>& blocks, Word mask) {
  ElementSet out(g);
  for (; mask != 0; mask &= mask - 1) out |= blocks[static_cast<std::size_t>(std::countr_zero(mask))];
  return out;
}

// Distinct right cosets H*x in order of their least element.
std::vector<ElementSet> right_cosets(const ElementSet& h) {
  const Group& g = h.group();
  std::vector<ElementSet> out;
  ElementSet covered(g);
  for (Element x = 0; x < g.order(); ++x) {
    if (covered.contains(x)) continue;
    auto c = right_translate(h, x);
    covered |= c;
    out.push_back(std::move(c));
  }
  return out;
}

// Exhaustive subset walks are capped well below 64 elements.
ElementSet set_from_mask_any(const Group& g, Word mask) { return ElementSet::from_mask(g, mask); }

std::size_t nonempty_subset_count(const Group& g) { return (std::size_t{1} << g.order()) - 1; }

class Emitter {
 public:
  Emitter(const SweepCallbacks& cb, SweepSummary& summary) : cb_(cb), summary_(summary) {}

  void verdict(const TheoremVerdict& v) {
    if (!last_ || last_->first.second != v.theorem || last_->first.first != v.group) {
      const auto key = std::make_pair(v.group, v.theorem);
      auto [it, inserted] = summary_.per_group.try_emplace(key);
      if (inserted) summary_.order.push_back(key);
      last_ = &*it;
      last_theorem_ = &summary_.per_theorem[v.theorem];
    }
    last_->second.add(v.status);
    last_theorem_->add(v.status);
    if (cb_.on_verdict) cb_.on_verdict(v);
  }
  void reserve(const std::string& group, TheoremId id) {
    const auto key = std::make_pair(group, id);
    if (summary_.per_group.try_emplace(key).second) summary_.order.push_back(key);
    summary_.per_theorem.try_emplace(id);
  }
  void notice(SweepNotice n) {
    if (cb_.on_notice) cb_.on_notice(n);
  }

 private:
  const SweepCallbacks& cb_;
  SweepSummary& summary_;
  // std::map nodes are stable, so the last entries can be reused.
  std::pair<const std::pair<std::string, TheoremId>, VerdictCounts>* last_ = nullptr;
  VerdictCounts* last_theorem_ = nullptr;
};

// Runs `count` tasks in parallel batches; each fills a verdict vector that
// is emitted in task order.
template <class Task>
void run_tasks(std::size_t count, unsigned jobs, Emitter& emit, Task&& task) {
  const std::size_t batch = std::max<std::size_t>(1, kBatchPerJob * std::max(1U, jobs));
  std::vector<std::vector<TheoremVerdict>> results;
  for (std::size_t base = 0; base < count; base += batch) {
    const std::size_t n = std::min(batch, count - base);
    results.assign(n, {});
    parallel_for(n, jobs, [&](std::size_t i) { task(base + i, results[i]); });
    for (auto& r : results)
      for (auto& v : r) emit.verdict(v);
  }
}

TheoremVerdict refusal(TheoremId id, const std::string& group, std::string why) {
  TheoremVerdict v;
  v.theorem = id;
  v.group = group;
  v.status = Status::not_applicable;
  v.hypothesis = std::move(why);
  return v;
}

std::string cap_message(const char* what, std::size_t order, std::size_t cap) {
  return std::string(what) + " cap exceeded: order " + std::to_string(order) + " > " +
         std::to_string(cap);
}

void sweep_kneser(const Group& g, const SweepConfig& c, Emitter& emit) {
  const auto policy = NonAbelianPolicy::explore;
  if (const auto* sampled = std::get_if<Sampled>(&c.mode)) {
    const std::size_t tasks = (sampled->count + kSamplesPerTask - 1) / kSamplesPerTask;
    run_tasks(tasks, c.jobs, emit, [&](std::size_t t, std::vector<TheoremVerdict>& out) {
      auto rng = seeded_rng(sampled->seed, g.label(), 1, t);
      const std::size_t n = std::min(kSamplesPerTask, sampled->count - t * kSamplesPerTask);
      for (std::size_t i = 0; i < n; ++i) {
        const auto x = random_nonempty(g, rng);
        const auto y = random_nonempty(g, rng);
        out.push_back(check_kneser(x, y, policy));
      }
    });
    return;
  }
  if (g.order() > c.pair_order_cap) {
    emit.verdict(refusal(TheoremId::kneser, g.label(),
                         cap_message("exhaustive pair enumeration", g.order(), c.pair_order_cap)));
    return;
  }
  const std::size_t subsets = nonempty_subset_count(g);
  run_tasks(subsets, c.jobs, emit, [&](std::size_t i, std::vector<TheoremVerdict>& out) {
    const auto x = set_from_mask_any(g, i + 1);
    out.reserve(subsets);
    for (std::size_t j = 1; j <= subsets; ++j) out.push_back(check_kneser(x, set_from_mask_any(g, j), policy));
  });
}

void sweep_olson(const Group& g, const SweepConfig& c, Emitter& emit) {
  const auto sampled = std::get_if<Sampled>(&c.mode);
  if (!sampled && g.order() > c.pair_order_cap) {
    emit.verdict(refusal(TheoremId::olson, g.label(),
                         cap_message("exhaustive pair enumeration", g.order(), c.pair_order_cap)));
    return;
  }
  const auto subgroups = all_subgroups(g);
  std::vector<std::vector<ElementSet>> cosets;
  for (const auto& h : subgroups) cosets.push_back(right_cosets(h));
  const std::size_t m = subgroups.size();

  run_tasks(m * m, c.jobs, emit, [&](std::size_t pair, std::vector<TheoremVerdict>& out) {
    const std::size_t hi = pair / m, ki = pair % m;
    const auto& h = subgroups[hi];
    const auto& k = subgroups[ki];
    if (sampled) {
      auto rng = seeded_rng(sampled->seed, g.label(), 2, pair);
      for (std::size_t i = 0; i < sampled->count; ++i) {
        const auto x = random_union(g, cosets[hi], rng);
        const auto y = random_union(g, cosets[ki], rng);
        out.push_back(check_olson(x, y, h, k));
      }
      return;
    }
    // X ranges over nonempty unions of right H-cosets (exactly the sets
    // with HX = X), Y likewise for K.
    // Pairs failing KX != X or HY != Y are skipped rather than reported.
    const Word xs = (Word{1} << cosets[hi].size()) - 1;
    const Word ys = (Word{1} << cosets[ki].size()) - 1;
    std::vector<ElementSet> ylist;
    for (Word b = 1; b <= ys; ++b) {
      auto y = union_by_mask(g, cosets[ki], b);
      if (!(product(h, y) == y)) ylist.push_back(std::move(y));
    }
    for (Word a = 1; a <= xs; ++a) {
      const auto x = union_by_mask(g, cosets[hi], a);
      if (product(k, x) == x) continue;
      for (const auto& y : ylist) out.push_back(check_olson(x, y, h, k));
    }
  });
}

struct PerSetSelection {
  bool intersect, chain, corollary, dichotomy;
  bool any() const { return intersect || chain || corollary || dichotomy; }
};

void sweep_per_set(const Group& g, const SweepConfig& c, const PerSetSelection& sel,
                   const CellProvider& provider, Emitter& emit) {
  const std::string& label = g.label();
  const auto policy = NonAbelianPolicy::explore;
  const auto* sampled = std::get_if<Sampled>(&c.mode);

  auto refuse_all = [&](const std::string& why) {
    if (sel.intersect) emit.verdict(refusal(TheoremId::cell_intersect, label, why));
    if (sel.chain) emit.verdict(refusal(TheoremId::subgroup_kernel_chain, label, why));
    if (sel.corollary)
      for (auto id : {TheoremId::corollary_i, TheoremId::corollary_ii, TheoremId::corollary_iii})
        if (selected(c, id)) emit.verdict(refusal(id, label, why));
    if (sel.dichotomy) emit.verdict(refusal(TheoremId::dichotomy, label, why));
  };
  if (g.order() > c.enumeration_cap || !g.narrow()) {
    refuse_all(cap_message("exhaustive cell enumeration", g.order(),
                           std::min(c.enumeration_cap, kNarrowOrderCap)));
    return;
  }
  bool dichotomy_enabled = sel.dichotomy;
  if (sel.dichotomy && !sampled && g.order() > c.t_order_cap) {
    emit.verdict(refusal(TheoremId::dichotomy, label,
                         cap_message("exhaustive T enumeration", g.order(), c.t_order_cap)));
    dichotomy_enabled = false;
  }

  const auto sets = expand_subset_source(g, c.s_source, c.s_min);
  EnumerationOptions eopts;
  eopts.order_cap = c.enumeration_cap;
  auto cells_for = [&](const ElementSet& s) {
    if (provider) return provider(s, g.order());
    return enumerate_cells(s, g.order(), Exhaustive{}, eopts);
  };

  run_tasks(sets.size(), c.jobs, emit, [&](std::size_t i, std::vector<TheoremVerdict>& out) {
    const auto& s = sets[i];
    if (!s.contains_identity()) {
      const std::string why = "identity not in S";
      auto na = [&](TheoremId id) {
        auto v = refusal(id, label, why);
        v.instance = {{"S", s}};
        out.push_back(std::move(v));
      };
      if (sel.intersect) na(TheoremId::cell_intersect);
      if (sel.chain) na(TheoremId::subgroup_kernel_chain);
      for (auto id : {TheoremId::corollary_i, TheoremId::corollary_ii, TheoremId::corollary_iii})
        if (sel.corollary && selected(c, id)) na(id);
      if (dichotomy_enabled) na(TheoremId::dichotomy);
      return;
    }
    const auto cells = cells_for(s);

    if (sel.intersect) {
      auto pair_check = [&](std::size_t a, std::size_t b) {
        out.push_back(check_cell_intersection(s, cells[a].cell, cells[b].cell));
      };
      if (sampled) {
        auto rng = seeded_rng(sampled->seed, label, 3, fnv1a_words(s.words()));
        if (!cells.empty()) {
          std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
          for (std::size_t n = 0; n < sampled->count; ++n) {
            const auto a = pick(rng);
            const auto b = pick(rng);
            pair_check(a, b);
          }
        }
      } else {
        for (std::size_t a = 0; a < cells.size(); ++a)
          for (std::size_t b = a + 1; b < cells.size(); ++b) pair_check(a, b);
      }
    }
    if (sel.chain) out.push_back(check_theorem_subgroup_kernels(s, cells));
    if (sel.corollary) {
      auto parts = check_corollary_kernel_structure(s, cells, policy);
      for (auto& p : parts)
        if (selected(c, p.theorem)) out.push_back(std::move(p));
    }
    if (dichotomy_enabled) {
      const DichotomyChecker check(s, balandraud_analysis(s, cells).subgroup, policy);
      if (sampled) {
        auto rng = seeded_rng(sampled->seed, label, 4, fnv1a_words(s.words()));
        for (std::size_t n = 0; n < sampled->count; ++n) out.push_back(check(random_nonempty(g, rng)));
      } else {
        const std::size_t subsets = nonempty_subset_count(g);
        for (std::size_t t = 1; t <= subsets; ++t) out.push_back(check(set_from_mask_any(g, t)));
      }
    }
  });
}

}  // namespace

void validate_config(const SweepConfig& config) {
  if (config.theorems.empty()) throw parse_error("no theorems selected");
  if (const auto* s = std::get_if<Sampled>(&config.mode); s && s->count == 0)
    throw parse_error("sampled mode needs a positive sample count");
  if (config.s_min == 0) throw parse_error("S-size lower bound must be at least 1");
  if (const auto* r = std::get_if<RandomSets>(&config.s_source); r && r->k < config.s_min)
    throw parse_error("rand:k:n:seed needs k >= the S-size lower bound");
  if (config.jobs == 0) throw parse_error("--jobs must be positive");
}

std::vector<ElementSet> expand_subset_source(const Group& g, const SubsetSource& source,
                                             std::size_t s_min) {
  std::vector<ElementSet> out;
  if (const auto* ex = std::get_if<ExplicitSets>(&source)) {
    for (const auto& elems : ex->sets) {
      for (Element e : elems)
        if (e >= g.order())
          throw parse_error("index " + std::to_string(e) + " >= order " + std::to_string(g.order()) +
                            " of group " + g.label());
      out.emplace_back(g, elems);
    }
    return out;
  }
  std::vector<Element> others;
  for (Element e = 1; e < g.order(); ++e) others.push_back(e);

  if (const auto* all = std::get_if<AllSetsUpTo>(&source)) {
    const std::size_t hi = std::min(all->k, g.order());
    // Walk (size-1)-combinations of the non-identity elements.
    for (std::size_t size = std::max<std::size_t>(s_min, 1); size <= hi; ++size) {
      const std::size_t first = out.size();
      const std::size_t r = size - 1;
      std::vector<std::size_t> idx(r);
      for (std::size_t i = 0; i < r; ++i) idx[i] = i;
      while (true) {
        ElementSet s = g.singleton(g.identity());
        for (auto i : idx) s.insert(others[i]);
        out.push_back(std::move(s));
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == others.size() - r + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
      }
      std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(), bitmask_less);
    }
    return out;
  }

  const auto& rnd = std::get<RandomSets>(source);
  auto rng = seeded_rng(rnd.seed, g.label(), 0);
  const std::size_t lo = std::max<std::size_t>(s_min, 1);
  const std::size_t hi = std::min(rnd.k, g.order());
  if (lo > hi) return out;
  for (std::size_t i = 0; i < rnd.n; ++i) {
    ElementSet s = g.singleton(g.identity());
    for (auto e : random_subset(others, lo - 1, hi - 1, rng)) s.insert(e);
    out.push_back(std::move(s));
  }
  return out;
}

SweepSummary run_sweep(const SweepConfig& config, const SweepCallbacks& callbacks,
                       const CellProvider& cells) {
  validate_config(config);
  SweepSummary summary;
  Emitter emit(callbacks, summary);

  const PerSetSelection per_set{
      selected(config, TheoremId::cell_intersect),
      selected(config, TheoremId::subgroup_kernel_chain),
      selected(config, TheoremId::corollary_i) || selected(config, TheoremId::corollary_ii) ||
          selected(config, TheoremId::corollary_iii),
      selected(config, TheoremId::dichotomy)};

  for (const auto& spec : config.groups) {
    GroupPtr g;
    try {
      g = build_group(spec, config.group_options);
    } catch (const cap_error& e) {
      for (auto id : kAllTheorems)
        if (selected(config, id)) emit.verdict(refusal(id, spec, e.what()));
      continue;
    }
    if (callbacks.on_group) callbacks.on_group(g);
    for (auto id : kAllTheorems)
      if (selected(config, id)) emit.reserve(g->label(), id);
    if (!is_abelian(*g))
      for (auto id : kAllTheorems)
        if (selected(config, id) && abelian_only(id))
          emit.notice({g->label(), id,
                       "group is not abelian; abelian-only guarantees do not apply "
                       "(exploration mode: failures are reported as FINDING)"});

    if (selected(config, TheoremId::kneser)) sweep_kneser(*g, config, emit);
    if (selected(config, TheoremId::olson)) sweep_olson(*g, config, emit);
    if (per_set.any()) sweep_per_set(*g, config, per_set, cells, emit);
  }
  return summary;
}

SweepResult run_sweep(const SweepConfig& config) {
  SweepResult result;
  SweepCallbacks cb{[&](const TheoremVerdict& v) { result.verdicts.push_back(v); },
                    [&](const SweepNotice& n) { result.notices.push_back(n); },
                    [&](const GroupPtr& g) { result.groups.push_back(g); }};
  result.summary = run_sweep(config, cb);
  return result;
}

}  // namespace cellkit
