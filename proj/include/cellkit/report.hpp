#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cellkit/cell_engine.hpp"
#include "cellkit/theorem_suite.hpp"

namespace cellkit {

using Json = nlohmann::ordered_json;

enum class ReportFormat { jsonl, csv, table };

/// Provenance header embedded in every report. The deterministic part goes
/// to the report itself; wall-clock time and cache counters vary between
/// runs and are written to the diagnostic stream instead.
struct RunManifest {
  std::string command;
  std::vector<std::string> groups;
  std::string set_spec;
  std::string mode = "exhaustive";
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> u_max;
  std::vector<std::string> theorems;

  double wall_clock_ms = 0;
  std::size_t cache_hits = 0;
  std::size_t cache_misses = 0;
  std::size_t cache_corrupt = 0;

  Json header_json() const;
  Json run_stats_json() const;
};

Json verdict_json(const TheoremVerdict& v);
Json notice_json(const SweepNotice& n);
Json counts_json(const VerdictCounts& c);
// "group,theorem,holds,violated,not_applicable,findings" rows, header first.
void write_summary_csv(std::ostream& out, const SweepSummary& summary);
void write_summary_table(std::ostream& out, const SweepSummary& summary);

Json cell_json(const CellRecord& c, bool is_kernel);
Json kernel_json(const KernelRecord& k);
Json balandraud_json(const ElementSet& s, const BalandraudResult& r);

std::string_view to_string(BalandraudBranch b);

}  // namespace cellkit
