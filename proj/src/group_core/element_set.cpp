#include "cellkit/element_set.hpp"

#include <algorithm>
#include <cstdio>

#include "cellkit/errors.hpp"
#include "cellkit/group.hpp"

namespace cellkit {

ElementSet::ElementSet(const Group& g) : group_(&g), words_(g.word_count(), Word{0}) {}

ElementSet::ElementSet(const Group& g, std::initializer_list<Element> elems) : ElementSet(g) {
  for (Element e : elems) insert(e);
}

ElementSet::ElementSet(const Group& g, std::span<const Element> elems) : ElementSet(g) {
  for (Element e : elems) insert(e);
}

ElementSet ElementSet::from_mask(const Group& g, Word mask) {
  ElementSet s(g);
  if (g.order() < kWordBits && (mask >> g.order()) != 0)
    throw contract_violation("mask has bits beyond group order " + std::to_string(g.order()));
  s.words_[0] = mask;
  return s;
}

ElementSet ElementSet::from_words(const Group& g, std::span<const Word> words) {
  ElementSet s(g);
  if (words.size() != s.words_.size()) throw contract_violation("word count does not match group");
  std::copy(words.begin(), words.end(), s.words_.begin());
  const std::size_t tail = g.order() % kWordBits;
  if (tail != 0 && (s.words_.back() >> tail) != 0)
    throw contract_violation("mask has bits beyond group order " + std::to_string(g.order()));
  return s;
}

std::size_t ElementSet::universe_size() const noexcept { return group_->order(); }

void ElementSet::require_same_group(const ElementSet& other) const {
  if (group_ != other.group_)
    throw contract_violation("element sets from different groups (" + group_->label() + ", " +
                             other.group_->label() + ")");
}

void ElementSet::insert(Element e) {
  if (e >= universe_size())
    throw contract_violation("element " + std::to_string(e) + " out of range for order " +
                             std::to_string(universe_size()));
  words_[e / kWordBits] |= Word{1} << (e % kWordBits);
}

void ElementSet::erase(Element e) {
  if (e >= universe_size()) return;
  words_[e / kWordBits] &= ~(Word{1} << (e % kWordBits));
}

bool ElementSet::is_subset_of(const ElementSet& other) const {
  require_same_group(other);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  return true;
}

bool ElementSet::intersects(const ElementSet& other) const {
  require_same_group(other);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & other.words_[i]) != 0) return true;
  return false;
}

ElementSet& ElementSet::operator|=(const ElementSet& other) {
  require_same_group(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

ElementSet& ElementSet::operator&=(const ElementSet& other) {
  require_same_group(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

ElementSet& ElementSet::operator-=(const ElementSet& other) {
  require_same_group(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

ElementSet ElementSet::complement() const {
  ElementSet out(*group_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
  const std::size_t tail = universe_size() % kWordBits;
  if (tail != 0) out.words_.back() &= (Word{1} << tail) - 1;
  return out;
}

bool ElementSet::operator==(const ElementSet& other) const {
  require_same_group(other);
  return std::equal(words_.begin(), words_.end(), other.words_.begin());
}

ElementSet::Word ElementSet::mask() const {
  if (words_.size() != 1) throw contract_violation("mask() on a wide group; use words()");
  return words_[0];
}

Element ElementSet::min_element() const {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w] != 0) return static_cast<Element>(w * kWordBits + std::countr_zero(words_[w]));
  throw contract_violation("min_element() of an empty set");
}

std::vector<Element> ElementSet::elements() const {
  std::vector<Element> out;
  out.reserve(size());
  for_each([&](Element e) { out.push_back(e); });
  return out;
}

std::string ElementSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for_each([&](Element e) {
    if (!first) out += ',';
    out += std::to_string(e);
    first = false;
  });
  out += '}';
  return out;
}

std::string ElementSet::to_hex() const {
  std::string out = "0x";
  bool leading = true;
  char buf[17];
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (leading) {
      if (words_[i] == 0 && i != 0) continue;
      std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(words_[i]));
      leading = false;
    } else {
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(words_[i]));
    }
    out += buf;
  }
  return out;
}

bool bitmask_less(const ElementSet& a, const ElementSet& b) {
  const auto wa = a.words();
  const auto wb = b.words();
  if (wa.size() != wb.size()) return wa.size() < wb.size();
  for (std::size_t i = wa.size(); i-- > 0;)
    if (wa[i] != wb[i]) return wa[i] < wb[i];
  return false;
}

bool size_then_mask_less(const ElementSet& a, const ElementSet& b) {
  const auto sa = a.size();
  const auto sb = b.size();
  if (sa != sb) return sa < sb;
  return bitmask_less(a, b);
}

}  // namespace cellkit
