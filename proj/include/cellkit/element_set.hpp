#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace cellkit {

using Element = std::uint32_t;

class Group;

/// Subset of a finite group's elements, stored as a bitmask over element
/// indices. Narrow groups (order <= 64) use a single inline word.
///
/// A set remembers the Group it indexes into; combining sets from two
/// different Group objects throws contract_violation. The Group must
/// outlive every set built over it.
class ElementSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  explicit ElementSet(const Group& g);
  ElementSet(const Group& g, std::initializer_list<Element> elems);
  ElementSet(const Group& g, std::span<const Element> elems);

  static ElementSet from_mask(const Group& g, Word mask);
  static ElementSet from_words(const Group& g, std::span<const Word> words);

  const Group& group() const noexcept { return *group_; }
  bool same_group(const ElementSet& other) const noexcept { return group_ == other.group_; }

  bool contains(Element e) const noexcept {
    return e < universe_size() && ((words_[e / kWordBits] >> (e % kWordBits)) & 1U) != 0;
  }
  bool contains_identity() const noexcept { return (words_[0] & 1U) != 0; }
  void insert(Element e);
  void erase(Element e);

  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const noexcept {
    for (Word w : words_)
      if (w != 0) return false;
    return true;
  }

  bool is_subset_of(const ElementSet& other) const;
  bool intersects(const ElementSet& other) const;

  ElementSet& operator|=(const ElementSet& other);
  ElementSet& operator&=(const ElementSet& other);
  ElementSet& operator-=(const ElementSet& other);  // set difference
  ElementSet complement() const;

  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }
  friend ElementSet operator-(ElementSet a, const ElementSet& b) { return a -= b; }

  bool operator==(const ElementSet& other) const;

  std::span<const Word> words() const noexcept { return {words_.data(), words_.size()}; }
  // Single-word view; throws contract_violation on wide groups.
  Word mask() const;

  // Lowest element index; the set must be nonempty.
  Element min_element() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        const auto bit = static_cast<unsigned>(std::countr_zero(bits));
        f(static_cast<Element>(w * kWordBits + bit));
        bits &= bits - 1;
      }
    }
  }

  std::vector<Element> elements() const;
  // "{0,6}" in canonical element order.
  std::string to_string() const;
  // "0x41"; the most significant word first.
  std::string to_hex() const;

 private:
  std::size_t universe_size() const noexcept;
  void require_same_group(const ElementSet& other) const;

  const Group* group_;
  boost::container::small_vector<Word, 1> words_;
};

// Numeric comparison of the bitmasks read as unsigned integers.
bool bitmask_less(const ElementSet& a, const ElementSet& b);
// Orders by (cardinality, bitmask value); the canonical order for subgroup lists.
bool size_then_mask_less(const ElementSet& a, const ElementSet& b);

}  // namespace cellkit
