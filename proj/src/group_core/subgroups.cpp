#include <algorithm>
#include <set>
#include <vector>

#include "cellkit/group.hpp"

namespace cellkit {

namespace {

// Right-multiplies by generators until closed; in a finite group the
// generated submonoid is the generated subgroup.
ElementSet closure_of(const Group& g, std::span<const Element> gens) {
  ElementSet out = g.singleton(g.identity());
  std::vector<Element> frontier{g.identity()};
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const Element x = frontier[i];
    for (Element s : gens) {
      const Element y = g.mul(x, s);
      if (!out.contains(y)) {
        out.insert(y);
        frontier.push_back(y);
      }
    }
  }
  return out;
}

std::vector<ElementSet::Word> key_of(const ElementSet& s) {
  return {s.words().begin(), s.words().end()};
}

}  // namespace

ElementSet generated_subgroup(const ElementSet& gens) {
  const auto elems = gens.elements();
  return closure_of(gens.group(), elems);
}

bool is_subgroup(const ElementSet& h) {
  const Group& g = h.group();
  if (!h.contains_identity() || g.order() % h.size() != 0) return false;
  bool closed = true;
  h.for_each([&](Element a) {
    if (!closed) return;
    h.for_each([&](Element b) {
      if (closed && !h.contains(g.mul(a, b))) closed = false;
    });
  });
  return closed;
}

std::vector<ElementSet> all_subgroups(const Group& g) {
  struct Node {
    ElementSet set;
    std::vector<Element> gens;
  };
  std::set<std::vector<ElementSet::Word>> seen;
  std::vector<Node> nodes;
  nodes.push_back({g.singleton(g.identity()), {}});
  seen.insert(key_of(nodes.front().set));

  // Every subgroup is reached by adjoining its generators one at a time.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (Element x = 0; x < g.order(); ++x) {
      if (nodes[i].set.contains(x)) continue;
      auto gens = nodes[i].gens;
      gens.push_back(x);
      ElementSet k = closure_of(g, gens);
      if (seen.insert(key_of(k)).second) nodes.push_back({std::move(k), std::move(gens)});
    }
  }

  std::vector<ElementSet> out;
  out.reserve(nodes.size());
  for (auto& n : nodes) out.push_back(std::move(n.set));
  std::sort(out.begin(), out.end(), size_then_mask_less);
  return out;
}

}  // namespace cellkit
