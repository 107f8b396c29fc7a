#include <doctest.h>

#include <random>

#include "cellkit/errors.hpp"
#include "cellkit/subset_algebra.hpp"
#include "support/helpers.hpp"
#include "support/oracle.hpp"

using namespace cellkit;
using testing::set_of;

namespace {

ElementSet random_set(const GroupPtr& g, std::mt19937_64& rng, double density = 0.3) {
  std::bernoulli_distribution coin(density);
  ElementSet out(*g);
  for (Element e = 0; e < g->order(); ++e)
    if (coin(rng)) out.insert(e);
  if (out.empty()) out.insert(static_cast<Element>(rng() % g->order()));
  return out;
}

// Slow product over element lists, valid for any width.
ElementSet naive_product(const ElementSet& x, const ElementSet& y) {
  const Group& g = x.group();
  ElementSet out(g);
  for (Element a : x.elements())
    for (Element b : y.elements()) out.insert(g.mul(a, b));
  return out;
}

}  // namespace

TEST_CASE("product examples") {
  const auto z12 = build_group("Z12");
  const auto s = set_of(z12, {0, 1, 6, 7});
  CHECK(product(set_of(z12, {0}), s) == s);
  CHECK(product(z12->all_elements(), s) == z12->all_elements());
  CHECK(product(set_of(z12, {0, 6}), s) == set_of(z12, {0, 1, 6, 7}));
  CHECK(product(z12->empty_set(), s).empty());
}

TEST_CASE("product matches the oracle on narrow groups") {
  std::mt19937_64 rng(7);
  for (const char* label : {"Z12", "D4", "Q8", "S4", "Z2xZ2xZ4", "D16", "Z64"}) {
    INFO(label);
    const auto g = build_group(label);
    const oracle::Table t(*g);
    for (int i = 0; i < 200; ++i) {
      const auto x = random_set(g, rng);
      const auto y = random_set(g, rng);
      CHECK(product(x, y).mask() == t.product(x.mask(), y.mask()));
    }
  }
}

TEST_CASE("product matches naive expansion on wide groups") {
  std::mt19937_64 rng(11);
  for (const char* label : {"Z65", "Z130", "D50", "Z8xZ16"}) {
    INFO(label);
    const auto g = build_group(label, GroupOptions{true});
    for (int i = 0; i < 30; ++i) {
      const auto x = random_set(g, rng, 0.05);
      const auto y = random_set(g, rng, 0.05);
      CHECK(product(x, y) == naive_product(x, y));
    }
  }
}

TEST_CASE("left and right translates") {
  const auto z6 = build_group("Z6");
  CHECK(left_translate(2, set_of(z6, {0, 5})) == set_of(z6, {1, 2}));
  CHECK(right_translate(set_of(z6, {2, 3}), z6->inv(2)) == set_of(z6, {0, 1}));

  const auto d3 = build_group("D3");
  const auto x = set_of(d3, {0, 1});
  for (Element g = 0; g < 6; ++g) {
    CHECK(left_translate(g, x) == product(d3->singleton(g), x));
    CHECK(right_translate(x, g) == product(x, d3->singleton(g)));
  }
}

TEST_CASE("left_stabilizer examples") {
  const auto z12 = build_group("Z12");
  CHECK(left_stabilizer(z12->all_elements()).stabilizer == z12->all_elements());
  for (const auto& h : all_subgroups(*z12)) CHECK(left_stabilizer(h).stabilizer == h);
  CHECK(left_stabilizer(set_of(z12, {0, 1, 6, 7})).stabilizer == set_of(z12, {0, 6}));
  CHECK_THROWS_AS(left_stabilizer(z12->empty_set()), contract_violation);
}

TEST_CASE("left_stabilizer matches the oracle and is a subgroup") {
  std::mt19937_64 rng(3);
  for (const char* label : {"Z12", "D4", "Q8", "D6", "Z2xZ2xZ2"}) {
    INFO(label);
    const auto g = build_group(label);
    const oracle::Table t(*g);
    for (int i = 0; i < 300; ++i) {
      const auto a = random_set(g, rng, 0.5);
      const auto st = left_stabilizer(a).stabilizer;
      CHECK(st.mask() == t.stabilizer(a.mask()));
      CHECK(is_subgroup(st));
      CHECK(product(st, a) == a);
    }
  }
}

TEST_CASE("is_periodic") {
  const auto z6 = build_group("Z6");
  CHECK(is_periodic(set_of(z6, {1, 4}), set_of(z6, {0})));
  CHECK(is_periodic(z6->all_elements(), set_of(z6, {0, 2, 4})));
  CHECK_FALSE(is_periodic(set_of(z6, {0, 1}), set_of(z6, {0, 3})));
  CHECK(is_periodic(set_of(z6, {0, 1, 3, 4}), set_of(z6, {0, 3})));
  CHECK_THROWS_AS(is_periodic(set_of(z6, {0, 1}), set_of(z6, {0, 1})), contract_violation);
}

TEST_CASE("difference_counts") {
  const auto z6 = build_group("Z6");
  const auto a = set_of(z6, {1, 2, 5});
  auto d = difference_counts(a, a);
  CHECK(d.x_minus_y == 0);
  CHECK(d.y_minus_x == 0);
  d = difference_counts(set_of(z6, {0, 1}), set_of(z6, {3, 4, 5}));
  CHECK(d.x_minus_y == 2);
  CHECK(d.y_minus_x == 3);
  d = difference_counts(set_of(z6, {0, 3}), set_of(z6, {0, 2, 4}));
  CHECK(d.x_minus_y == 1);
  CHECK(d.y_minus_x == 2);
}
