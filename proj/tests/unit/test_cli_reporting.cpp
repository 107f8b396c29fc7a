#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cellkit/cache.hpp"
#include "cellkit/cell_engine.hpp"
#include "cellkit/cli.hpp"
#include "cellkit/errors.hpp"
#include "cellkit/subset_spec.hpp"
#include "support/helpers.hpp"

using namespace cellkit;
using testing::set_of;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args, const std::string& cache_dir = {}) {
  std::ostringstream out, err;
  CliEnvironment env;
  env.cache_dir = cache_dir;
  Run r;
  r.code = run_cli(args, out, err, env);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<nlohmann::json> lines_of(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(nlohmann::json::parse(line));
  return out;
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cellkit_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("subset spec parsing") {
  const auto z6 = build_group("Z6");
  CHECK(parse_subset_spec("{0}", *z6) == set_of(z6, {0}));
  const auto z12 = build_group("Z12");
  CHECK(parse_subset_spec("{0,1,6,7}", *z12) == set_of(z12, {0, 1, 6, 7}));
  CHECK(parse_subset_spec(" { 7 , 0 } ", *z12) == set_of(z12, {0, 7}));
  CHECK(parse_subset_spec("0xc3", *z12) == set_of(z12, {0, 1, 6, 7}));
  CHECK(parse_subset_spec("{}", *z12).empty());
  try {
    parse_subset_spec("{0,99}", *z12);
    FAIL("expected a parse error");
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).find("index 99 ≥ order 12") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_subset_spec("{0,a}", *z12), parse_error);
  CHECK_THROWS_AS(parse_subset_spec("0,1", *z12), parse_error);
  CHECK_THROWS_AS(parse_subset_spec("0x1000", *z12), parse_error);
}

TEST_CASE("subset source parsing") {
  CHECK(std::get<AllSetsUpTo>(parse_subset_source("all:3")).k == 3);
  const auto r = std::get<RandomSets>(parse_subset_source("rand:4:10:77"));
  CHECK(r.k == 4);
  CHECK(r.n == 10);
  CHECK(r.seed == 77);
  CHECK(std::get<ExplicitSets>(parse_subset_source("{0,2}")).sets.front() ==
        std::vector<Element>{0, 2});
  CHECK_THROWS_AS(parse_subset_source("rand:4:10"), parse_error);
  CHECK_THROWS_AS(parse_subset_source("all:x"), parse_error);
}

TEST_CASE("group list expansion") {
  CHECK(expand_group_list("Z2..Z4") == std::vector<std::string>{"Z2", "Z3", "Z4"});
  CHECK(expand_group_list("Z2..4,D4,Q8") == std::vector<std::string>{"Z2", "Z3", "Z4", "D4", "Q8"});
  CHECK(expand_group_list("").empty());
  CHECK_THROWS_AS(expand_group_list("Z5..Z2"), parse_error);
}

TEST_CASE("cells command on the Z12 example") {
  const auto r = cli({"cells", "Z12", "{0,1,6,7}", "--umax", "2", "--format", "jsonl"});
  REQUIRE(r.code == kExitOk);
  const auto lines = lines_of(r.out);
  CHECK(lines.front()["type"] == "manifest");
  std::size_t identity_kernels_u2 = 0;
  bool saw_balandraud = false;
  for (const auto& j : lines) {
    if (j["type"] == "cell" && j["deficiency"] == 2 && j["kernel"] == true &&
        j["contains_identity"] == true) {
      ++identity_kernels_u2;
      CHECK(j["elements"] == "{0,6}");
    }
    if (j["type"] == "kernel" && j["u"] == 2) CHECK(j["identity_kernel"] == "{0,6}");
    if (j["type"] == "balandraud") {
      saw_balandraud = true;
      CHECK(j["H"] == "{0,6}");
      CHECK(j["u_star"] == 2);
    }
  }
  CHECK(identity_kernels_u2 == 1);
  CHECK(saw_balandraud);
}

TEST_CASE("cells with S = {identity} lists every nonempty subset") {
  const auto r = cli({"cells", "Z6", "{0}", "--umax", "0", "--format", "jsonl"});
  REQUIRE(r.code == kExitOk);
  std::size_t cells = 0;
  for (const auto& j : lines_of(r.out)) cells += j["type"] == "cell";
  CHECK(cells == 63);
}

TEST_CASE("cells normalizes S without the identity") {
  const auto r = cli({"cells", "Z6", "{2,3}", "--format", "jsonl"});
  REQUIRE(r.code == kExitOk);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() > 1);
  CHECK(lines[1]["type"] == "normalized");
  CHECK(lines[1]["normalized"] == "{0,1}");
  CHECK(lines[1]["shift"] == 2);
}

TEST_CASE("cells above the enumeration cap is refused") {
  const auto r = cli({"cells", "Z64", "{0,1}", "--mode", "exhaustive"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("cap") != std::string::npos);
  CHECK(cli({"cells", "Z65", "{0,1}"}).code == kExitUsage);
}

TEST_CASE("sampled cells need a seed and a sample count") {
  CHECK(cli({"cells", "Z30", "{0,1}", "--mode", "sampled", "--samples", "10"}).code == kExitUsage);
  CHECK(cli({"cells", "Z30", "{0,1}", "--mode", "sampled", "--seed", "1"}).code == kExitUsage);
  const auto r = cli({"cells", "Z30", "{0,1,15}", "--mode", "sampled", "--samples", "50", "--seed",
                      "1", "--format", "jsonl"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("\"balandraud\"") == std::string::npos);
}

TEST_CASE("subgroup command") {
  const auto r = cli({"subgroup", "Z12", "{0,1,6,7}", "--format", "jsonl"});
  REQUIRE(r.code == kExitOk);
  const auto j = lines_of(r.out).back();
  CHECK(j["H"] == "{0,6}");
  CHECK(j["u_star"] == 2);
  const auto t = cli({"subgroup", "Z6", "{0,1,2}", "--format", "table"});
  CHECK(t.out.find("H = {0,1,2,3,4,5}") != std::string::npos);
}

TEST_CASE("info command") {
  const auto r = cli({"info", "D4", "--format", "jsonl"});
  REQUIRE(r.code == kExitOk);
  const auto j = lines_of(r.out).front();
  CHECK(j["order"] == 8);
  CHECK(j["abelian"] == false);
  CHECK(j["subgroups"] == 10);
}

TEST_CASE("verify exit codes") {
  CHECK(cli({"verify", "--groups", "Z2..Z6", "--theorem", "kneser"}).code == kExitOk);
  CHECK(cli({"verify", "--groups", "D4,Q8", "--theorem", "chain", "--smax", "4"}).code == kExitOk);
  CHECK(cli({"verify", "--groups", "Z6"}).code == kExitUsage);
  CHECK(cli({"verify", "--groups", "Z6", "--theorem", "fermat"}).code == kExitUsage);
  CHECK(cli({"verify", "--groups", "Z6", "--theorem", "kneser", "--format", "xml"}).code == kExitUsage);
  CHECK(cli({"verify", "--groups", "Z6", "--theorem", "kneser", "--bogus"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"verify", "--groups", "", "--theorem", "all"}).code == kExitOk);
}

TEST_CASE("verify jsonl layout") {
  const auto r = cli({"verify", "--groups", "Z4", "--theorem", "kneser,dichotomy", "--format", "jsonl"});
  REQUIRE(r.code == kExitOk);
  const auto lines = lines_of(r.out);
  CHECK(lines.front()["type"] == "manifest");
  CHECK(lines.front()["theorems"] == nlohmann::json::array({"KNESER", "DICHOTOMY"}));
  CHECK(lines.back()["type"] == "totals");
  CHECK(lines.back()["exit_status"] == 0);
  std::size_t verdicts = 0, summaries = 0;
  for (const auto& j : lines) {
    verdicts += j["type"] == "verdict";
    summaries += j["type"] == "summary";
  }
  CHECK(verdicts > 0);
  CHECK(summaries == 2);
  CHECK(r.err.find("wall_clock_ms") != std::string::npos);
  CHECK(r.out.find("wall_clock_ms") == std::string::npos);
}

TEST_CASE("verify csv and table formats") {
  const auto csv = cli({"verify", "--groups", "Z4", "--theorem", "kneser", "--format", "csv"});
  CHECK(csv.out.find("group,theorem,holds,violated,not_applicable,findings") != std::string::npos);
  const auto table = cli({"verify", "--groups", "Z4", "--theorem", "kneser", "--format", "table"});
  CHECK(table.out.find("result: OK") != std::string::npos);
}

TEST_CASE("verify on a nonabelian group prints the banner") {
  const auto r = cli({"verify", "--groups", "D4", "--theorem", "dichotomy", "--format", "jsonl",
                      "--emit", "none"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("\"notice\"") != std::string::npos);
  CHECK(r.out.find("not abelian") != std::string::npos);
}

TEST_CASE("verify output is byte-identical across runs") {
  const std::vector<std::string> args{"verify", "--groups", "Z13,D5", "--theorem", "all", "--set",
                                      "rand:4:3:8", "--mode", "sampled", "--samples", "40",
                                      "--seed", "12", "--format", "jsonl"};
  const auto a = cli(args);
  const auto b = cli(args);
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);
  CHECK_FALSE(a.out.empty());
}

TEST_CASE("verify reads a JSON config and flags override it") {
  const auto dir = fresh_dir("config");
  fs::create_directories(dir);
  const auto path = (dir / "sweep.json").string();
  std::ofstream(path) << R"({"groups": ["Z3", "Z4"], "theorems": "kneser", "format": "jsonl"})";
  const auto r = cli({"verify", "--config", path});
  REQUIRE(r.code == kExitOk);
  CHECK(lines_of(r.out).front()["groups"] == nlohmann::json::array({"Z3", "Z4"}));
  const auto o = cli({"verify", "--config", path, "--groups", "Z5"});
  CHECK(lines_of(o.out).front()["groups"] == nlohmann::json::array({"Z5"}));

  std::ofstream(dir / "bad.json") << "{\"groups\": ";
  CHECK(cli({"verify", "--config", (dir / "bad.json").string()}).code == kExitUsage);
  CHECK(cli({"verify", "--config", (dir / "missing.json").string()}).code == kExitUsage);
}

TEST_CASE("cell payload encoding round-trips") {
  const auto z12 = build_group("Z12");
  const auto s = set_of(z12, {0, 1, 6, 7});
  const auto cells = enumerate_cells(s, 3);
  const auto decoded = decode_cells(encode_cells(cells), s);
  REQUIRE(decoded);
  REQUIRE(decoded->size() == cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CHECK((*decoded)[i].cell == cells[i].cell);
    CHECK((*decoded)[i].product == cells[i].product);
    CHECK((*decoded)[i].deficiency == cells[i].deficiency);
    CHECK((*decoded)[i].is_subgroup == cells[i].is_subgroup);
  }
  CHECK_FALSE(decode_cells("cells 2\n0x41 0xc3 2 SI\n", s));
  CHECK_FALSE(decode_cells("garbage", s));
}

TEST_CASE("cache hit gives identical output") {
  const auto dir = fresh_dir("cache_hit");
  const std::vector<std::string> args{"cells", "Z12", "{0,1,6,7}", "--umax", "2", "--format", "jsonl"};
  const auto first = cli(args, dir.string());
  const auto second = cli(args, dir.string());
  CHECK(first.out == second.out);
  CHECK(first.err.find("\"cache_misses\":1") != std::string::npos);
  CHECK(second.err.find("\"cache_hits\":1") != std::string::npos);
  const auto flag = cli({"cells", "Z12", "{0,1,6,7}", "--umax", "2", "--format", "jsonl",
                         "--cache-dir", dir.string()});
  CHECK(flag.err.find("\"cache_hits\":1") != std::string::npos);
}

TEST_CASE("a different tool version misses the cache") {
  const auto dir = fresh_dir("cache_version");
  int calls = 0;
  auto compute = [&] {
    ++calls;
    return std::string("payload");
  };
  {
    DiskCache v1(dir, "1.0");
    CHECK(v1.get_or_compute("k", compute) == "payload");
    CHECK(v1.get_or_compute("k", compute) == "payload");
    CHECK(v1.hits() == 1);
  }
  DiskCache v2(dir, "2.0");
  CHECK(v2.get_or_compute("k", compute) == "payload");
  CHECK(v2.misses() == 1);
  CHECK(calls == 2);
}

TEST_CASE("truncated cache entries are recomputed with a warning") {
  const auto dir = fresh_dir("cache_truncated");
  std::ostringstream warnings;
  DiskCache cache(dir, "1.0", &warnings);
  cache.get_or_compute("key", [] { return std::string("some payload\nwith lines\n"); });
  const auto file = cache.path_for("key");
  REQUIRE(fs::exists(file));
  const auto size = fs::file_size(file);
  fs::resize_file(file, size / 2);
  int calls = 0;
  const auto again = cache.get_or_compute("key", [&] {
    ++calls;
    return std::string("some payload\nwith lines\n");
  });
  CHECK(again == "some payload\nwith lines\n");
  CHECK(calls == 1);
  CHECK(cache.corrupt() == 1);
  CHECK(warnings.str().find("corrupt") != std::string::npos);
  CHECK(fs::file_size(file) == size);
}

TEST_CASE("an unwritable cache directory degrades to no cache") {
  const auto dir = fresh_dir("cache_blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  std::ostringstream warnings;
  DiskCache cache(dir / "file" / "sub", "1.0", &warnings);
  CHECK_FALSE(cache.enabled());
  CHECK(warnings.str().find("not writable") != std::string::npos);
  CHECK(cache.get_or_compute("k", [] { return std::string("v"); }) == "v");

  const auto r = cli({"cells", "Z6", "{0,1}", "--format", "jsonl"}, (dir / "file" / "sub").string());
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("warning") != std::string::npos);
}
