#include "cellkit/report.hpp"

#include <cstdio>
#include <iomanip>

#include "cellkit/group.hpp"
#include "cellkit/version.hpp"

namespace cellkit {

Json RunManifest::header_json() const {
  Json j;
  j["type"] = "manifest";
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["groups"] = groups;
  if (!set_spec.empty()) j["set"] = set_spec;
  j["mode"] = mode;
  if (samples) j["samples"] = *samples;
  if (seed) j["seed"] = *seed;
  if (u_max) j["umax"] = *u_max;
  if (!theorems.empty()) j["theorems"] = theorems;
  return j;
}

Json RunManifest::run_stats_json() const {
  Json j;
  j["type"] = "run_stats";
  j["command"] = command;
  j["wall_clock_ms"] = static_cast<std::int64_t>(wall_clock_ms);
  j["cache_hits"] = cache_hits;
  j["cache_misses"] = cache_misses;
  j["cache_corrupt"] = cache_corrupt;
  return j;
}

std::string_view to_string(BalandraudBranch b) {
  switch (b) {
    case BalandraudBranch::kernel: return "kernel";
    case BalandraudBranch::generated: return "generated";
    case BalandraudBranch::trivial: return "trivial";
  }
  return "unknown";
}

Json verdict_json(const TheoremVerdict& v) {
  Json j;
  j["type"] = "verdict";
  j["theorem"] = to_string(v.theorem);
  j["status"] = to_string(v.status);
  j["group"] = v.group;
  Json inst = Json::object();
  for (const auto& n : v.instance) inst[std::string(n.name)] = n.set.to_string();
  j["instance"] = std::move(inst);
  if (!v.hypothesis.empty()) j["hypothesis"] = v.hypothesis;
  if (v.witness) {
    Json w;
    w["relation"] = v.witness->relation;
    w["lhs"] = v.witness->lhs;
    w["rhs"] = v.witness->rhs;
    Json sets = Json::object();
    for (const auto& n : v.witness->sets) sets[std::string(n.name)] = n.set.to_string();
    w["sets"] = std::move(sets);
    if (!v.witness->detail.empty()) w["detail"] = v.witness->detail;
    j["witness"] = std::move(w);
  }
  return j;
}

Json notice_json(const SweepNotice& n) {
  Json j;
  j["type"] = "notice";
  j["group"] = n.group;
  j["theorem"] = to_string(n.theorem);
  j["message"] = n.message;
  return j;
}

Json counts_json(const VerdictCounts& c) {
  Json j;
  j["holds"] = c.holds;
  j["violated"] = c.violated;
  j["not_applicable"] = c.not_applicable;
  j["findings"] = c.findings;
  return j;
}

void write_summary_csv(std::ostream& out, const SweepSummary& summary) {
  out << "group,theorem,holds,violated,not_applicable,findings\n";
  for (const auto& key : summary.order) {
    const auto& c = summary.per_group.at(key);
    out << key.first << ',' << to_string(key.second) << ',' << c.holds << ',' << c.violated << ','
        << c.not_applicable << ',' << c.findings << '\n';
  }
}

void write_summary_table(std::ostream& out, const SweepSummary& summary) {
  out << std::left << std::setw(14) << "group" << std::setw(24) << "theorem" << std::right
      << std::setw(10) << "holds" << std::setw(10) << "violated" << std::setw(10) << "n/a"
      << std::setw(10) << "findings" << '\n';
  for (const auto& key : summary.order) {
    const auto& c = summary.per_group.at(key);
    out << std::left << std::setw(14) << key.first << std::setw(24) << to_string(key.second)
        << std::right << std::setw(10) << c.holds << std::setw(10) << c.violated << std::setw(10)
        << c.not_applicable << std::setw(10) << c.findings << '\n';
  }
}

Json cell_json(const CellRecord& c, bool is_kernel) {
  Json j;
  j["type"] = "cell";
  j["mask"] = c.cell.to_hex();
  j["elements"] = c.cell.to_string();
  j["size"] = c.cell.size();
  j["deficiency"] = c.deficiency;
  j["product"] = c.product.to_hex();
  j["kernel"] = is_kernel;
  j["subgroup"] = c.is_subgroup;
  j["contains_identity"] = c.contains_identity;
  return j;
}

Json kernel_json(const KernelRecord& k) {
  Json j;
  j["type"] = "kernel";
  j["u"] = k.u;
  j["count"] = k.kernels.size();
  if (!k.kernels.empty()) j["cardinality"] = k.kernels.front().cell.size();
  j["identity_kernels"] = k.identity_kernel_count;
  if (k.unique_identity_kernel) {
    j["identity_kernel"] = k.unique_identity_kernel->cell.to_string();
    j["identity_kernel_subgroup"] = k.unique_identity_kernel->is_subgroup;
  }
  j["identity_kernel_unique"] = k.unique_identity_kernel.has_value();
  return j;
}

Json balandraud_json(const ElementSet& s, const BalandraudResult& r) {
  Json j;
  j["type"] = "balandraud";
  j["group"] = s.group().label();
  j["S"] = s.to_string();
  j["H"] = r.subgroup.to_string();
  j["mask"] = r.subgroup.to_hex();
  if (r.u_star) j["u_star"] = *r.u_star;
  else j["u_star"] = nullptr;
  j["branch"] = to_string(r.branch);
  j["identity_kernels"] = r.identity_kernel_count;
  if (r.uniqueness_violation) j["uniqueness_violation"] = true;
  return j;
}

}  // namespace cellkit
