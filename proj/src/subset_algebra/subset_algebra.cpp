#include "cellkit/subset_algebra.hpp"

#include "cellkit/errors.hpp"
#include "cellkit/group.hpp"

namespace cellkit {

namespace {

void require_same_group(const ElementSet& a, const ElementSet& b) {
  if (!a.same_group(b))
    throw contract_violation("element sets from different groups (" + a.group().label() + ", " +
                             b.group().label() + ")");
}

}  // namespace

ElementSet product(const ElementSet& x, const ElementSet& s) {
  require_same_group(x, s);
  const Group& g = x.group();
  if (g.narrow()) {
    const auto xm = x.mask();
    const auto sm = s.mask();
    ElementSet::Word out = 0;
    for (auto xa = xm; xa != 0; xa &= xa - 1) {
      const auto a = static_cast<Element>(std::countr_zero(xa));
      for (auto sb = sm; sb != 0; sb &= sb - 1)
        out |= ElementSet::Word{1} << g.mul(a, static_cast<Element>(std::countr_zero(sb)));
    }
    return ElementSet::from_mask(g, out);
  }
  ElementSet out(g);
  const auto right = s.elements();
  x.for_each([&](Element a) {
    for (Element b : right) out.insert(g.mul(a, b));
  });
  return out;
}

ElementSet left_translate(Element g, const ElementSet& x) {
  const Group& grp = x.group();
  ElementSet out(grp);
  x.for_each([&](Element a) { out.insert(grp.mul(g, a)); });
  return out;
}

ElementSet right_translate(const ElementSet& x, Element g) {
  const Group& grp = x.group();
  ElementSet out(grp);
  x.for_each([&](Element a) { out.insert(grp.mul(a, g)); });
  return out;
}

StabilizerResult left_stabilizer(const ElementSet& a) {
  if (a.empty()) throw contract_violation("left_stabilizer of the empty set");
  const Group& g = a.group();
  ElementSet stab(g);
  const auto members = a.elements();
  for (Element h = 0; h < g.order(); ++h) {
    bool fixes = true;
    for (Element x : members)
      if (!a.contains(g.mul(h, x))) {
        fixes = false;
        break;
      }
    // h*a is a subset of a with the same size, hence equal.
    if (fixes) stab.insert(h);
  }
  return {std::move(stab), a};
}

bool is_periodic(const ElementSet& a, const ElementSet& h) {
  require_same_group(a, h);
  if (!is_subgroup(h)) throw contract_violation("is_periodic: " + h.to_string() + " is not a subgroup");
  return product(h, a) == a;
}

DifferenceCounts difference_counts(const ElementSet& x, const ElementSet& y) {
  require_same_group(x, y);
  return {(x - y).size(), (y - x).size()};
}

}  // namespace cellkit
