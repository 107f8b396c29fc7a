#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cellkit/element_set.hpp"

namespace cellkit {

// Default refusal threshold for exhaustive enumeration (2^order work).
inline constexpr std::size_t kDefaultEnumerationCap = 24;

/// A cell X of S with its product XS and deficiency u = |XS| - |X|.
struct CellRecord {
  ElementSet cell;
  ElementSet product;
  std::size_t deficiency = 0;
  bool contains_identity = false;
  bool is_subgroup = false;
};

// Builds the record for x against s without checking that x is a cell.
CellRecord make_cell_record(const ElementSet& x, const ElementSet& s);

// Canonical enumeration order: (deficiency, cardinality, bitmask).
bool cell_order_less(const CellRecord& a, const CellRecord& b);

struct KernelRecord {
  std::size_t u = 0;
  // All u-cells of minimal cardinality; empty when S has no u-cell.
  std::vector<CellRecord> kernels;
  // Set only when exactly one kernel contains the identity.
  std::optional<CellRecord> unique_identity_kernel;
  std::size_t identity_kernel_count = 0;
};

struct ChainViolation {
  std::size_t u = 0;  // deficiency of m
  std::size_t v = 0;  // deficiency of n
  ElementSet m;
  ElementSet n;
  std::string reason;
};

struct KernelChainReport {
  ElementSet s;
  std::map<std::size_t, KernelRecord> per_u;
  // Subgroup kernels sorted by cardinality (then bitmask).
  std::vector<ElementSet> subgroup_kernel_chain;
  bool chain_ok = true;
  std::vector<ChainViolation> violations;
};

struct Exhaustive {};
struct Sampled {
  std::size_t count = 0;
  std::uint64_t seed = 0;
};
using EnumerationMode = std::variant<Exhaustive, Sampled>;

struct EnumerationOptions {
  std::size_t order_cap = kDefaultEnumerationCap;
  unsigned jobs = 1;
};

/// True iff no z outside x has z*s inside x*s. Requires identity in s and
/// x nonempty (contract_violation otherwise).
bool is_cell(const ElementSet& x, const ElementSet& s);

/// The largest X containing t with X*s = t*s, namely { z : z*s within t*s }.
CellRecord cell_closure(const ElementSet& t, const ElementSet& s);

/// Cells of s with deficiency <= u_max, sorted by cell_order_less.
///
/// Exhaustive mode returns every cell. It walks candidate product sets
/// A containing s: X_A = { z : z*s within A } is the identity-containing
/// cell with product A whenever X_A*s = A, and every other cell is a
/// left translate of one of those. Refuses with cap_error when the group
/// order exceeds options.order_cap.
///
/// Sampled mode returns the deduplicated closures of `count` random seed
/// sets, which is a subset of the exhaustive answer.
std::vector<CellRecord> enumerate_cells(const ElementSet& s, std::size_t u_max,
                                        const EnumerationMode& mode = Exhaustive{},
                                        const EnumerationOptions& options = {});

// Source of complete exhaustive enumerations; lets callers plug in a cache.
using CellProvider =
    std::function<std::vector<CellRecord>(const ElementSet& s, std::size_t u_max)>;

// `cells` must contain every cell of deficiency u (extra entries are ignored).
KernelRecord kernels_at(const ElementSet& s, std::size_t u, std::span<const CellRecord> cells);

enum class BalandraudBranch {
  kernel,     // u* exists: the identity u*-kernel
  generated,  // no u-cell with 1 <= u <= |S|-2: the subgroup generated by S
  trivial,    // |S| = 1: the trivial subgroup
};

struct BalandraudResult {
  ElementSet subgroup;
  BalandraudBranch branch = BalandraudBranch::trivial;
  std::optional<std::size_t> u_star;
  std::size_t identity_kernel_count = 0;
  // Abelian group whose identity u*-kernel is not unique.
  bool uniqueness_violation = false;
};

// `cells` must be complete up to deficiency |s| - 2.
BalandraudResult balandraud_analysis(const ElementSet& s, std::span<const CellRecord> cells);
BalandraudResult balandraud_analysis(const ElementSet& s, const EnumerationOptions& options = {});
ElementSet balandraud_subgroup(const ElementSet& s);

// `cells` must be complete up to deficiency |s| - 1.
KernelChainReport kernel_chain(const ElementSet& s, std::span<const CellRecord> cells);
KernelChainReport kernel_chain(const ElementSet& s, const EnumerationOptions& options = {});

struct NormalizedSet {
  ElementSet s;    // s * shift^-1, contains the identity
  Element shift;   // least element of the original set
};

NormalizedSet normalize_s(const ElementSet& s);

}  // namespace cellkit
