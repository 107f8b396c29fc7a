#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "cellkit/errors.hpp"
#include "cellkit/group.hpp"

namespace cellkit {

namespace {

std::size_t parse_positive(std::string_view digits, std::string_view spec) {
  std::size_t value = 0;
  const auto* end = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(digits.data(), end, value);
  if (digits.empty() || ec != std::errc{} || ptr != end || value == 0)
    throw parse_error("bad group spec '" + std::string(spec) + "': expected a positive integer, got '" +
                      std::string(digits) + "'");
  return value;
}

// Guards table allocation before the Group constructor sees the order.
void check_order(std::size_t order, const GroupOptions& options) {
  const std::size_t cap = options.wide ? kWideOrderCap : kNarrowOrderCap;
  if (order > cap)
    throw cap_error("group order " + std::to_string(order) + " exceeds the " +
                    (options.wide ? std::string("wide-bitmask") : std::string("narrow")) + " cap " +
                    std::to_string(cap) + (options.wide ? "" : "; enable wide mode"));
}

// Mixed radix with the first factor most significant; all-zero is the identity.
GroupPtr direct_product_of_cyclics(std::string label, const std::vector<std::size_t>& moduli,
                                   const GroupOptions& options) {
  std::size_t order = 1;
  for (auto m : moduli) {
    order *= m;
    check_order(order, options);
  }
  const std::size_t k = moduli.size();
  std::vector<std::size_t> digits_a(k), digits_b(k);
  auto decode = [&](std::size_t x, std::vector<std::size_t>& d) {
    for (std::size_t i = k; i-- > 0;) {
      d[i] = x % moduli[i];
      x /= moduli[i];
    }
  };
  std::vector<Element> table(order * order);
  for (std::size_t a = 0; a < order; ++a) {
    decode(a, digits_a);
    for (std::size_t b = 0; b < order; ++b) {
      decode(b, digits_b);
      std::size_t c = 0;
      for (std::size_t i = 0; i < k; ++i) c = c * moduli[i] + (digits_a[i] + digits_b[i]) % moduli[i];
      table[a * order + b] = static_cast<Element>(c);
    }
  }
  return make_group(std::move(label), order, std::move(table), options);
}

// r^i s^j is stored at index i + n*j.
GroupPtr dihedral(std::size_t n, const GroupOptions& options) {
  const std::size_t order = 2 * n;
  check_order(order, options);
  std::vector<Element> table(order * order);
  for (std::size_t x = 0; x < order; ++x)
    for (std::size_t y = 0; y < order; ++y) {
      const std::size_t a = x % n, b = x / n, c = y % n, d = y / n;
      const std::size_t rot = b == 0 ? (a + c) % n : (a + n - c) % n;
      table[x * order + y] = static_cast<Element>(rot + n * ((b + d) % 2));
    }
  return make_group("D" + std::to_string(n), order, std::move(table), options);
}

// Permutations in lexicographic order; mul(p, q) = p after q.
GroupPtr symmetric(std::size_t n, const GroupOptions& options) {
  if (n > 5) throw parse_error("S" + std::to_string(n) + ": symmetric groups are supported for n <= 5");
  std::size_t order = 1;
  for (std::size_t i = 2; i <= n; ++i) order *= i;
  check_order(order, options);

  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  std::map<std::vector<int>, Element> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index.emplace(perms[i], static_cast<Element>(i));

  std::vector<Element> table(order * order);
  std::vector<int> composed(n);
  for (std::size_t x = 0; x < order; ++x)
    for (std::size_t y = 0; y < order; ++y) {
      for (std::size_t i = 0; i < n; ++i) composed[i] = perms[x][static_cast<std::size_t>(perms[y][i])];
      table[x * order + y] = index.at(composed);
    }
  return make_group("S" + std::to_string(n), order, std::move(table), options);
}

// Index 2*b + sign for basis b in (1, i, j, k) and sign 1 meaning negative.
GroupPtr quaternion(const GroupOptions& options) {
  // basis product: {sign, basis}
  constexpr std::array<std::array<std::pair<int, int>, 4>, 4> basis = {{
      {{{0, 0}, {0, 1}, {0, 2}, {0, 3}}},
      {{{0, 1}, {1, 0}, {0, 3}, {1, 2}}},
      {{{0, 2}, {1, 3}, {1, 0}, {0, 1}}},
      {{{0, 3}, {0, 2}, {1, 1}, {1, 0}}},
  }};
  std::vector<Element> table(64);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      const auto [sign, b] = basis[static_cast<std::size_t>(x / 2)][static_cast<std::size_t>(y / 2)];
      const int s = (x % 2) ^ (y % 2) ^ sign;
      table[static_cast<std::size_t>(x * 8 + y)] = static_cast<Element>(2 * b + s);
    }
  return make_group("Q8", 8, std::move(table), options);
}

}  // namespace

GroupPtr load_cayley_file(const std::string& path, const GroupOptions& options) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open Cayley file '" + path + "'");
  std::size_t order = 0;
  if (!(in >> order) || order == 0) throw parse_error("Cayley file '" + path + "': missing or bad order");
  check_order(order, options);
  std::vector<Element> table;
  table.reserve(order * order);
  for (std::size_t i = 0; i < order * order; ++i) {
    long long v = 0;
    if (!(in >> v))
      throw parse_error("Cayley file '" + path + "': expected " + std::to_string(order * order) +
                        " entries, found " + std::to_string(i));
    if (v < 0 || static_cast<unsigned long long>(v) >= order)
      throw validation_error("closure fails: entry (" + std::to_string(i / order) + "," +
                             std::to_string(i % order) + ") = " + std::to_string(v) +
                             " is not an element index");
    table.push_back(static_cast<Element>(v));
  }
  std::string extra;
  if (in >> extra) throw parse_error("Cayley file '" + path + "': trailing data '" + extra + "'");
  return make_group("cayley:" + path, order, std::move(table), options);
}

GroupPtr build_group(std::string_view spec, const GroupOptions& options) {
  if (spec.starts_with("cayley:")) {
    const auto path = spec.substr(7);
    if (path.empty()) throw parse_error("bad group spec 'cayley:': missing path");
    return load_cayley_file(std::string(path), options);
  }
  if (spec == "Q8") return quaternion(options);
  if (spec.size() >= 2 && spec[0] == 'D') return dihedral(parse_positive(spec.substr(1), spec), options);
  if (spec.size() >= 2 && spec[0] == 'S') return symmetric(parse_positive(spec.substr(1), spec), options);
  if (spec.size() >= 2 && spec[0] == 'Z') {
    std::vector<std::size_t> moduli;
    std::size_t pos = 0;
    while (true) {
      if (pos >= spec.size() || spec[pos] != 'Z')
        throw parse_error("bad group spec '" + std::string(spec) + "': expected 'Z' at offset " +
                          std::to_string(pos));
      const auto x = spec.find('x', pos);
      const auto digits = spec.substr(pos + 1, x == std::string_view::npos ? std::string_view::npos
                                                                           : x - pos - 1);
      moduli.push_back(parse_positive(digits, spec));
      if (x == std::string_view::npos) break;
      pos = x + 1;
    }
    return direct_product_of_cyclics(std::string(spec), moduli, options);
  }
  throw parse_error("bad group spec '" + std::string(spec) +
                    "': expected Z<n>, Z<a>xZ<b>..., D<n>, S<n>, Q8 or cayley:<path>");
}

}  // namespace cellkit
