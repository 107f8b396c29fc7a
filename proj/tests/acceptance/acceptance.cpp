// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cellkit/cell_engine.hpp"
#include "cellkit/subset_algebra.hpp"
#include "cellkit/theorem_suite.hpp"
#include "support/oracle.hpp"

using namespace cellkit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::vector<std::string> kUpTo8{"Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "D3", "S3",
                                      "Z7", "Z8", "Z2xZ4", "Z2xZ2xZ2", "D4", "Q8"};
const std::vector<std::string> kAbelianUpTo12{"Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "Z7",
                                              "Z8", "Z2xZ4", "Z2xZ2xZ2", "Z9", "Z3xZ3", "Z10",
                                              "Z11", "Z12", "Z2xZ6"};
const std::vector<std::string> kAbelian11To16{"Z11", "Z12", "Z2xZ6", "Z13", "Z14", "Z15",
                                              "Z16", "Z2xZ8", "Z4xZ4", "Z2xZ2xZ4", "Z2xZ2xZ2xZ2"};

// Runs a sweep without keeping verdicts; counts per (group, theorem).
struct Tally {
  SweepSummary summary;
  std::size_t notices = 0;
  std::vector<std::string> violations;
};

Tally sweep(SweepConfig config) {
  Tally t;
  SweepCallbacks cb;
  cb.on_verdict = [&](const TheoremVerdict& v) {
    if (v.status == Status::violated && t.violations.size() < 5) {
      std::string line = v.group + " " + std::string(to_string(v.theorem));
      for (const auto& n : v.instance) line += " " + std::string(n.name) + "=" + n.set.to_string();
      t.violations.push_back(line);
    }
  };
  cb.on_notice = [&](const SweepNotice&) { ++t.notices; };
  t.summary = run_sweep(config, cb);
  return t;
}

std::string first_violations(const Tally& t) {
  std::string out;
  for (const auto& v : t.violations) out += "\n    " + v;
  return out;
}

std::string run_binary(const std::string& args) {
  const std::string cmd = std::string(CELLKIT_BINARY) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot run " + cmd);
  std::string out;
  char buf[4096];
  while (const auto n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  ::pclose(pipe);
  return out;
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

Outcome enumeration_equivalence() {
  std::size_t instances = 0, mismatches = 0;
  for (const auto& label : kUpTo8) {
    const auto g = build_group(label);
    const oracle::Table t(*g);
    for (oracle::Mask s = 1; s <= t.full(); s += 2) {
      if (std::popcount(s) > 3) continue;
      std::set<oracle::Mask> enumerated;
      for (const auto& c : enumerate_cells(ElementSet::from_mask(*g, s), g->order()))
        enumerated.insert(c.cell.mask());
      const auto closed = t.cells_by_closure(s);
      const auto filtered = t.cells_by_filter(s);
      ++instances;
      if (enumerated != filtered || closed != filtered) ++mismatches;
    }
  }
  return {mismatches == 0 && instances > 0,
          std::to_string(kUpTo8.size()) + " groups, " + std::to_string(instances) +
              " sets S, " + std::to_string(mismatches) + " mismatches"};
}

Outcome kneser_sweep() {
  SweepConfig c;
  c.groups = {"Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z2xZ2", "Z2xZ4", "Z3xZ3"};
  c.theorems = {TheoremId::kneser};
  const auto t = sweep(c);
  bool nonvacuous = true;
  std::string vacuous;
  for (const auto& label : c.groups) {
    const auto g = build_group(label);
    bool prime = true;
    for (std::size_t d = 2; d * d <= g->order(); ++d) prime = prime && g->order() % d != 0;
    if (!prime && t.summary.per_group.at({label, TheoremId::kneser}).holds == 0) {
      nonvacuous = false;
      vacuous += " " + label;
    }
  }
  const auto& all = t.summary.per_theorem.at(TheoremId::kneser);
  return {all.violated == 0 && nonvacuous,
          std::to_string(all.total()) + " pairs, " + std::to_string(all.holds) + " HOLDS, " +
              std::to_string(all.violated) + " VIOLATED" +
              (nonvacuous ? "" : "; no HOLDS instance for" + vacuous) + first_violations(t)};
}

Outcome olson_sweep() {
  SweepConfig c;
  c.groups = kUpTo8;
  c.theorems = {TheoremId::olson};
  const auto t = sweep(c);
  const auto& all = t.summary.per_theorem.at(TheoremId::olson);
  return {all.violated == 0 && all.holds > 0,
          std::to_string(all.holds) + " HOLDS over all subgroup pairs and coset unions, " +
              std::to_string(all.violated) + " VIOLATED" + first_violations(t)};
}

Outcome cell_intersection() {
  SweepConfig c;
  c.groups = kUpTo8;
  c.theorems = {TheoremId::cell_intersect};
  c.s_source = AllSetsUpTo{4};
  const auto t = sweep(c);
  const auto& all = t.summary.per_theorem.at(TheoremId::cell_intersect);

  // Independent recount with the brute-force oracle.
  std::size_t pairs = 0, failures = 0;
  for (const auto& label : kUpTo8) {
    const auto g = build_group(label);
    const oracle::Table o(*g);
    for (oracle::Mask s = 1; s <= o.full(); s += 2) {
      if (std::popcount(s) > 4) continue;
      const auto cells = o.cells_by_filter(s);
      for (auto m1 : cells)
        for (auto m2 : cells) {
          if ((m1 & m2) == 0) continue;
          ++pairs;
          failures += !o.is_cell(m1 & m2, s);
        }
    }
  }
  return {all.violated == 0 && failures == 0 && all.holds > 0,
          std::to_string(all.holds) + " intersections checked, " + std::to_string(all.violated) +
              " VIOLATED; oracle recount " + std::to_string(pairs) + " pairs, " +
              std::to_string(failures) + " failures" + first_violations(t)};
}

Outcome subgroup_kernel_chain() {
  SweepConfig c;
  c.groups = {"D3", "D4", "Q8"};
  c.groups.insert(c.groups.end(), kAbelianUpTo12.begin(), kAbelianUpTo12.end());
  c.theorems = {TheoremId::subgroup_kernel_chain};
  c.s_source = AllSetsUpTo{4};
  const auto t = sweep(c);
  const auto& all = t.summary.per_theorem.at(TheoremId::subgroup_kernel_chain);
  return {all.violated == 0 && all.not_applicable == 0 && all.holds > 0,
          std::to_string(c.groups.size()) + " groups, " + std::to_string(all.holds) +
              " instances chain_ok, " + std::to_string(all.violated) + " VIOLATED, " +
              std::to_string(all.not_applicable) + " unchecked" + first_violations(t)};
}

Outcome kernel_structure() {
  SweepConfig c;
  c.groups = kAbelianUpTo12;
  c.theorems = {TheoremId::corollary_i, TheoremId::corollary_ii, TheoremId::corollary_iii};
  c.s_source = AllSetsUpTo{5};
  c.s_min = 3;
  const auto t = sweep(c);
  std::size_t violated = 0, inhabited = 0;
  std::string parts;
  for (auto id : c.theorems) {
    const auto& n = t.summary.per_theorem.at(id);
    violated += n.violated;
    inhabited = std::max(inhabited, n.holds);
    parts += " " + std::string(to_string(id)) + "=" + std::to_string(n.holds);
  }

  // The running example must be among the inhabited instances.
  const auto z12 = build_group("Z12");
  const ElementSet s(*z12, {0, 1, 6, 7});
  const auto verdicts = check_corollary_kernel_structure(s);
  const auto kernel = kernels_at(s, 2, enumerate_cells(s, 2));
  const bool example = verdicts[0].status == Status::holds && verdicts[1].status == Status::holds &&
                       verdicts[2].status == Status::holds && kernel.unique_identity_kernel &&
                       kernel.unique_identity_kernel->cell == ElementSet(*z12, {0, 6});
  return {violated == 0 && inhabited > 0 && example,
          "HOLDS per part:" + parts + ", " + std::to_string(violated) +
              " VIOLATED; Z12 {0,1,6,7} gives M = {0,6}: " + (example ? "yes" : "no") +
              first_violations(t)};
}

Outcome dichotomy() {
  SweepConfig small;
  small.groups = {"Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "Z7", "Z8", "Z2xZ4", "Z2xZ2xZ2",
                  "Z9", "Z3xZ3", "Z10"};
  small.theorems = {TheoremId::dichotomy};
  const auto a = sweep(small);
  const auto& exhaustive = a.summary.per_theorem.at(TheoremId::dichotomy);

  SweepConfig large;
  large.groups = kAbelian11To16;
  large.theorems = {TheoremId::dichotomy};
  large.s_source = RandomSets{16, 256, 20261015};
  large.mode = Sampled{100000, 1};
  const auto b = sweep(large);
  const auto& sampled = b.summary.per_theorem.at(TheoremId::dichotomy);

  return {exhaustive.violated == 0 && sampled.violated == 0 && exhaustive.not_applicable == 0 &&
              sampled.not_applicable == 0,
          "orders <= 10: " + std::to_string(exhaustive.holds) + " (S,T) pairs exhaustive; " +
              "orders 11-16: " + std::to_string(sampled.holds) + " sampled pairs (256 S per group, " +
              "1e5 T per S); " + std::to_string(exhaustive.violated + sampled.violated) +
              " VIOLATED" + first_violations(a) + first_violations(b)};
}

Outcome pinned_regression() {
  const auto sub = json_lines(run_binary("subgroup Z12 \"{0,1,6,7}\" --format jsonl"));
  bool h_ok = false;
  for (const auto& j : sub)
    if (j["type"] == "balandraud") h_ok = j["H"] == "{0,6}" && j["u_star"] == 2;

  const auto cells = json_lines(run_binary("cells Z12 \"{0,1,6,7}\" --umax 2 --format jsonl"));
  std::vector<std::string> identity_kernels;
  bool kernel_line_ok = false;
  for (const auto& j : cells) {
    if (j["type"] == "cell" && j["deficiency"] == 2 && j["kernel"] == true &&
        j["contains_identity"] == true)
      identity_kernels.push_back(j["elements"]);
    if (j["type"] == "kernel" && j["u"] == 2)
      kernel_line_ok = j["identity_kernel"] == "{0,6}" && j["identity_kernel_unique"] == true;
  }
  const bool unique = identity_kernels == std::vector<std::string>{"{0,6}"};
  return {h_ok && unique && kernel_line_ok,
          std::string("subgroup: H = {0,6}, u* = 2 ") + (h_ok ? "ok" : "MISSING") +
              "; cells: identity 2-kernels = " + std::to_string(identity_kernels.size()) +
              (unique ? " ({0,6})" : "") + (kernel_line_ok ? ", kernel line ok" : ", kernel line wrong")};
}

Outcome determinism() {
  const std::vector<std::string> runs{
      "verify --groups Z12,D5,Q8 --theorem all --set rand:5:6:3 --mode sampled --samples 500 "
      "--seed 42 --format jsonl",
      "verify --groups Z2..Z6,D3 --theorem all --smax 3 --format jsonl",
      "verify --groups Z14 --theorem kneser,olson --mode sampled --samples 2000 --seed 7 "
      "--format jsonl --jobs 2"};
  std::size_t identical = 0;
  std::size_t bytes = 0;
  for (const auto& args : runs) {
    const auto a = run_binary(args);
    const auto b = run_binary(args);
    bytes += a.size();
    identical += !a.empty() && a == b;
  }
  // Job count must not change the stream either.
  const auto one = run_binary(runs[0] + " --jobs 1");
  const auto three = run_binary(runs[0] + " --jobs 3");
  const bool jobs_ok = !one.empty() && one == three;
  return {identical == runs.size() && jobs_ok,
          std::to_string(identical) + "/" + std::to_string(runs.size()) +
              " invocations byte-identical on repeat (" + std::to_string(bytes) +
              " bytes); --jobs 1 vs 3 " + (jobs_ok ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"enumeration-oracle-equivalence", enumeration_equivalence},
      {"kneser-sweep", kneser_sweep},
      {"olson-sweep", olson_sweep},
      {"cell-intersection", cell_intersection},
      {"subgroup-kernel-chain", subgroup_kernel_chain},
      {"kernel-structure", kernel_structure},
      {"dichotomy", dichotomy},
      {"pinned-regression", pinned_regression},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::ostringstream time;
    time.precision(2);
    time << std::fixed << secs;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << time.str()
              << "s]" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
