#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cellkit/cell_engine.hpp"
#include "cellkit/element_set.hpp"
#include "cellkit/group.hpp"

namespace cellkit {

enum class TheoremId {
  kneser,
  olson,
  cell_intersect,
  subgroup_kernel_chain,
  corollary_i,
  corollary_ii,
  corollary_iii,
  dichotomy,
};

inline constexpr std::array<TheoremId, 8> kAllTheorems = {
    TheoremId::kneser,         TheoremId::olson,        TheoremId::cell_intersect,
    TheoremId::subgroup_kernel_chain, TheoremId::corollary_i, TheoremId::corollary_ii,
    TheoremId::corollary_iii,  TheoremId::dichotomy};

// FINDING is a VIOLATED outcome of an abelian-only statement checked on a
// nonabelian group in exploration mode.
enum class Status { holds, violated, not_applicable, finding };

std::string_view to_string(TheoremId id);
std::string_view to_string(Status s);
std::optional<TheoremId> theorem_from_string(std::string_view name);
bool abelian_only(TheoremId id);

enum class NonAbelianPolicy {
  not_applicable,  // abelian-only checks refuse nonabelian groups
  explore,         // evaluate anyway, report failures as FINDING
};

struct NamedSet {
  std::string_view name;
  ElementSet set;
};

/// Both sides of the checked relation, recomputed inside the verifier.
struct Witness {
  std::string relation;
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  std::vector<NamedSet> sets;
  std::string detail;
};

struct TheoremVerdict {
  TheoremId theorem = TheoremId::kneser;
  Status status = Status::not_applicable;
  std::string group;
  std::vector<NamedSet> instance;
  std::optional<Witness> witness;  // present for VIOLATED and FINDING
  std::string hypothesis;          // the failed hypothesis for NOT_APPLICABLE
};

TheoremVerdict check_kneser(const ElementSet& x, const ElementSet& y,
                            NonAbelianPolicy policy = NonAbelianPolicy::not_applicable);

TheoremVerdict check_olson(const ElementSet& x, const ElementSet& y, const ElementSet& h,
                           const ElementSet& k);

TheoremVerdict check_cell_intersection(const ElementSet& s, const ElementSet& m1,
                                       const ElementSet& m2);

// `cells` must be complete up to deficiency |s| - 1.
TheoremVerdict check_theorem_subgroup_kernels(const ElementSet& s, std::span<const CellRecord> cells);
TheoremVerdict check_theorem_subgroup_kernels(const ElementSet& s);

// One verdict per part: COROLLARY_I (subgroup and unique identity kernel),
// COROLLARY_II (periodicity of u-cells), COROLLARY_III (nesting).
// `cells` must be complete up to deficiency |s| - 2.
std::array<TheoremVerdict, 3> check_corollary_kernel_structure(
    const ElementSet& s, std::span<const CellRecord> cells,
    NonAbelianPolicy policy = NonAbelianPolicy::not_applicable);
std::array<TheoremVerdict, 3> check_corollary_kernel_structure(
    const ElementSet& s, NonAbelianPolicy policy = NonAbelianPolicy::not_applicable);

TheoremVerdict check_dichotomy(const ElementSet& s, const ElementSet& h, const ElementSet& t,
                               NonAbelianPolicy policy = NonAbelianPolicy::not_applicable);

// check_dichotomy for many T with one (S, H): the subgroup test and HS are
// computed once.
class DichotomyChecker {
 public:
  DichotomyChecker(ElementSet s, ElementSet h,
                   NonAbelianPolicy policy = NonAbelianPolicy::not_applicable);
  TheoremVerdict operator()(const ElementSet& t) const;

 private:
  ElementSet s_;
  ElementSet h_;
  ElementSet hs_;
  std::string refusal_;
  bool exploring_;
};

// ---------------------------------------------------------------------------
// Sweeps

// Where the S sets of a sweep come from.
struct ExplicitSets {
  std::vector<std::vector<Element>> sets;
};
struct AllSetsUpTo {
  std::size_t k = 0;  // every S containing the identity with s_min <= |S| <= k
};
struct RandomSets {
  std::size_t k = 0;  // size drawn uniformly from [s_min, k]
  std::size_t n = 0;
  std::uint64_t seed = 0;
};
using SubsetSource = std::variant<ExplicitSets, AllSetsUpTo, RandomSets>;

struct SweepConfig {
  std::vector<std::string> groups;
  std::vector<TheoremId> theorems;
  SubsetSource s_source = AllSetsUpTo{kWideOrderCap};
  std::size_t s_min = 1;
  // T / X / Y instances: exhaustive, or `count` seeded samples per S or per
  // subgroup pair. Sampled mode requires an explicit seed.
  EnumerationMode mode = Exhaustive{};
  unsigned jobs = 1;
  GroupOptions group_options;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  // Exhaustive X*Y pair sweeps (Kneser, Olson) refuse orders above this.
  std::size_t pair_order_cap = 12;
  // Exhaustive T sweeps (dichotomy) refuse orders above this.
  std::size_t t_order_cap = 16;
};

// Throws parse_error when the config is unusable.
void validate_config(const SweepConfig& config);

struct VerdictCounts {
  std::size_t holds = 0;
  std::size_t violated = 0;
  std::size_t not_applicable = 0;
  std::size_t findings = 0;
  std::size_t total() const { return holds + violated + not_applicable + findings; }
  void add(Status s);
};

struct SweepNotice {
  std::string group;
  TheoremId theorem;
  std::string message;
};

struct SweepSummary {
  // Keyed by (group label, theorem), in first-seen order via `order`.
  std::map<std::pair<std::string, TheoremId>, VerdictCounts> per_group;
  std::vector<std::pair<std::string, TheoremId>> order;
  std::map<TheoremId, VerdictCounts> per_theorem;
  std::size_t violated() const;
};

struct SweepCallbacks {
  std::function<void(const TheoremVerdict&)> on_verdict;
  std::function<void(const SweepNotice&)> on_notice;
  // Receives each group before its verdicts; verdict sets point into it.
  std::function<void(const GroupPtr&)> on_group;
};

/// Runs the selected theorem checkers over every instance in deterministic
/// order: groups in config order; within a group KNESER, then OLSON, then for
/// each S the per-S theorems in kAllTheorems order. Output order does not
/// depend on `jobs`.
/// `cells` overrides the exhaustive cell enumeration (e.g. with a cache).
SweepSummary run_sweep(const SweepConfig& config, const SweepCallbacks& callbacks,
                       const CellProvider& cells = {});

struct SweepResult {
  std::vector<GroupPtr> groups;  // keeps the verdict sets valid
  std::vector<TheoremVerdict> verdicts;
  std::vector<SweepNotice> notices;
  SweepSummary summary;
};

SweepResult run_sweep(const SweepConfig& config);

// The S sets a source yields for one group, in sweep order.
std::vector<ElementSet> expand_subset_source(const Group& g, const SubsetSource& source,
                                             std::size_t s_min);

}  // namespace cellkit
