#pragma once

#include <cstdint>
#include <vector>

#include "cellkit/element_set.hpp"
#include "cellkit/group.hpp"

namespace testing {

inline cellkit::ElementSet set_of(const cellkit::GroupPtr& g, std::initializer_list<cellkit::Element> e) {
  return cellkit::ElementSet(*g, e);
}

inline cellkit::ElementSet from_mask(const cellkit::GroupPtr& g, std::uint64_t m) {
  return cellkit::ElementSet::from_mask(*g, m);
}

// Labels of the built-in groups up to order 8.
inline const std::vector<const char*>& small_groups() {
  static const std::vector<const char*> labels{"Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "D3",
                                               "Z7", "Z8", "Z2xZ4", "Z2xZ2xZ2", "D4", "Q8"};
  return labels;
}

inline const std::vector<const char*>& abelian_upto_12() {
  static const std::vector<const char*> labels{"Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6",
                                               "Z7", "Z8", "Z2xZ4", "Z2xZ2xZ2", "Z9", "Z3xZ3",
                                               "Z10", "Z11", "Z12", "Z2xZ6"};
  return labels;
}

}  // namespace testing
