#include "cellkit/group.hpp"

#include <vector>

#include "cellkit/errors.hpp"
#include "cellkit/hash.hpp"

namespace cellkit {

namespace {

std::string triple(Element a, Element b, Element c) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

}  // namespace

void validate_group_table(std::size_t order, std::span<const Element> table) {
  if (order == 0) throw validation_error("group order must be positive");
  if (table.size() != order * order)
    throw validation_error("table has " + std::to_string(table.size()) + " entries, expected " +
                           std::to_string(order * order));
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i] >= order)
      throw validation_error("closure fails: entry (" + std::to_string(i / order) + "," +
                             std::to_string(i % order) + ") = " + std::to_string(table[i]) +
                             " is not an element index");

  auto at = [&](std::size_t a, std::size_t b) { return table[a * order + b]; };

  std::vector<char> seen(order);
  for (std::size_t r = 0; r < order; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t c = 0; c < order; ++c) {
      if (seen[at(r, c)])
        throw validation_error("not a Latin square: row " + std::to_string(r) + " repeats element " +
                               std::to_string(at(r, c)));
      seen[at(r, c)] = 1;
    }
  }
  for (std::size_t c = 0; c < order; ++c) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t r = 0; r < order; ++r) {
      if (seen[at(r, c)])
        throw validation_error("not a Latin square: column " + std::to_string(c) +
                               " repeats element " + std::to_string(at(r, c)));
      seen[at(r, c)] = 1;
    }
  }
  for (std::size_t x = 0; x < order; ++x)
    if (at(0, x) != x || at(x, 0) != x)
      throw validation_error("identity fails: element 0 is not a two-sided identity at x = " +
                             std::to_string(x));
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b) {
      const auto ab = at(a, b);
      for (std::size_t c = 0; c < order; ++c)
        if (at(ab, c) != at(a, at(b, c)))
          throw validation_error("not associative at (a,b,c) = " +
                                 triple(static_cast<Element>(a), static_cast<Element>(b),
                                        static_cast<Element>(c)));
    }
}

Group::Group(std::string label, std::size_t order, std::vector<Element> table,
             const GroupOptions& options)
    : label_(std::move(label)), order_(order), table_(std::move(table)) {
  if (order_ > kWideOrderCap)
    throw cap_error("group order " + std::to_string(order_) + " exceeds the wide-bitmask cap " +
                    std::to_string(kWideOrderCap));
  if (order_ > kNarrowOrderCap && !options.wide)
    throw cap_error("group order " + std::to_string(order_) + " exceeds the narrow cap " +
                    std::to_string(kNarrowOrderCap) + "; enable wide mode");
  validate_group_table(order_, table_);
  word_count_ = (order_ + ElementSet::kWordBits - 1) / ElementSet::kWordBits;

  // A Latin square with a two-sided identity gives each row exactly one
  // identity entry; associativity makes the right inverse two-sided.
  inverse_.resize(order_);
  for (std::size_t x = 0; x < order_; ++x)
    for (std::size_t y = 0; y < order_; ++y)
      if (table_[x * order_ + y] == 0) {
        inverse_[x] = static_cast<Element>(y);
        break;
      }

  std::uint64_t h = fnv1a_word(order_);
  for (Element e : table_) h = fnv1a_word(e, h);
  fingerprint_ = h;

  for (std::size_t a = 0; a < order_ && abelian_; ++a)
    for (std::size_t b = a + 1; b < order_; ++b)
      if (table_[a * order_ + b] != table_[b * order_ + a]) {
        abelian_ = false;
        break;
      }
}

ElementSet Group::all_elements() const { return ElementSet(*this).complement(); }

GroupPtr make_group(std::string label, std::size_t order, std::vector<Element> table,
                    const GroupOptions& options) {
  return std::make_shared<const Group>(std::move(label), order, std::move(table), options);
}

bool is_abelian(const Group& g) { return g.abelian(); }

std::size_t element_order(const Group& g, Element e) {
  std::size_t k = 1;
  for (Element x = e; x != g.identity(); x = g.mul(x, e)) ++k;
  return k;
}

}  // namespace cellkit
