#pragma once

#include <cstddef>

#include "cellkit/element_set.hpp"

namespace cellkit {

/// { a*b : a in x, b in s }. Empty when either side is empty.
ElementSet product(const ElementSet& x, const ElementSet& s);

// g*x and x*g.
ElementSet left_translate(Element g, const ElementSet& x);
ElementSet right_translate(const ElementSet& x, Element g);

struct StabilizerResult {
  ElementSet stabilizer;  // { g : g*target = target }, always a subgroup
  ElementSet target;
};

/// Left stabilizer (period) of a nonempty set, found by testing every left
/// translate. Throws contract_violation on the empty set, whose stabilizer
/// would be the whole group.
StabilizerResult left_stabilizer(const ElementSet& a);

// product(h, a) == a. h must be a subgroup (contract_violation otherwise).
bool is_periodic(const ElementSet& a, const ElementSet& h);

struct DifferenceCounts {
  std::size_t x_minus_y = 0;
  std::size_t y_minus_x = 0;
};

DifferenceCounts difference_counts(const ElementSet& x, const ElementSet& y);

}  // namespace cellkit
