#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cellkit/element_set.hpp"

namespace cellkit {

inline constexpr std::size_t kNarrowOrderCap = 64;
inline constexpr std::size_t kWideOrderCap = 1024;

struct GroupOptions {
  // Allows orders above kNarrowOrderCap (multi-word element sets).
  bool wide = false;
};

/// Finite group given by its Cayley table. Element 0 is the identity.
///
/// The constructor validates every group axiom and throws validation_error
/// naming the failing axiom and the offending elements. Groups are neither
/// copyable nor movable: element sets refer to their group by address.
class Group {
 public:
  Group(std::string label, std::size_t order, std::vector<Element> table,
        const GroupOptions& options = {});

  Group(const Group&) = delete;
  Group& operator=(const Group&) = delete;

  const std::string& label() const noexcept { return label_; }
  std::size_t order() const noexcept { return order_; }
  Element identity() const noexcept { return 0; }
  Element mul(Element a, Element b) const noexcept { return table_[a * order_ + b]; }
  Element inv(Element a) const noexcept { return inverse_[a]; }
  std::size_t word_count() const noexcept { return word_count_; }
  bool narrow() const noexcept { return word_count_ == 1; }
  std::span<const Element> table() const noexcept { return table_; }
  // FNV-1a over the table; distinguishes same-label Cayley files.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }
  bool abelian() const noexcept { return abelian_; }

  ElementSet empty_set() const { return ElementSet(*this); }
  ElementSet all_elements() const;
  ElementSet singleton(Element e) const { return ElementSet(*this, {e}); }

 private:
  std::string label_;
  std::size_t order_;
  std::size_t word_count_;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
  std::uint64_t fingerprint_;
  bool abelian_ = true;
};

using GroupPtr = std::shared_ptr<const Group>;

// Checks closure, Latin square, two-sided identity at index 0 and
// associativity, in that order. Throws validation_error on the first failure.
void validate_group_table(std::size_t order, std::span<const Element> table);

/// Builds a group from a spec string:
///   Z<n> | Z<a>xZ<b>[xZ<c>...] | D<n> (order 2n) | S<n> (n <= 5) | Q8 | cayley:<path>
GroupPtr build_group(std::string_view spec, const GroupOptions& options = {});

GroupPtr make_group(std::string label, std::size_t order, std::vector<Element> table,
                    const GroupOptions& options = {});

// Cayley file: first line the order n, then n rows of n indices.
GroupPtr load_cayley_file(const std::string& path, const GroupOptions& options = {});

ElementSet generated_subgroup(const ElementSet& gens);
// All subgroups sorted by (size, bitmask value), no duplicates.
std::vector<ElementSet> all_subgroups(const Group& g);
bool is_subgroup(const ElementSet& h);
bool is_abelian(const Group& g);
// Smallest k >= 1 with e^k = identity.
std::size_t element_order(const Group& g, Element e);

}  // namespace cellkit
