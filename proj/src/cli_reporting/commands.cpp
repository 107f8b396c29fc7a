#include "cellkit/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "cellkit/cache.hpp"
#include "cellkit/errors.hpp"
#include "cellkit/group.hpp"
#include "cellkit/report.hpp"
#include "cellkit/subset_spec.hpp"
#include "cellkit/theorem_suite.hpp"
#include "cellkit/version.hpp"

namespace cellkit {

namespace {

using Clock = std::chrono::steady_clock;

struct CommonOptions {
  std::string group;
  std::string groups;
  std::string set;
  std::string set_flag;
  std::string format;
  std::string mode = "exhaustive";
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string cache_dir;
  unsigned jobs = 1;
  bool wide = false;
  std::size_t enum_cap = kDefaultEnumerationCap;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* samples_opt = nullptr;
};

struct VerifyOptions {
  std::string theorems;
  std::size_t s_min = 1;
  std::optional<std::size_t> s_max;
  std::string emit;
  std::string config;
};

ReportFormat parse_format(const std::string& name, const CliEnvironment& env) {
  if (name.empty()) return env.stdout_is_tty ? ReportFormat::table : ReportFormat::jsonl;
  if (name == "jsonl") return ReportFormat::jsonl;
  if (name == "csv") return ReportFormat::csv;
  if (name == "table") return ReportFormat::table;
  throw parse_error("unknown --format '" + name + "' (jsonl|csv|table)");
}

std::vector<TheoremId> parse_theorems(const std::string& list) {
  std::vector<TheoremId> out;
  auto add = [&](TheoremId id) {
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  };
  std::stringstream in(list);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (name.empty()) continue;
    if (name == "all") {
      for (auto id : kAllTheorems) add(id);
    } else if (name == "kneser") {
      add(TheoremId::kneser);
    } else if (name == "olson") {
      add(TheoremId::olson);
    } else if (name == "lemma" || name == "intersect" || name == "cell-intersect") {
      add(TheoremId::cell_intersect);
    } else if (name == "chain" || name == "kernels" || name == "subgroup-kernel-chain") {
      add(TheoremId::subgroup_kernel_chain);
    } else if (name == "corollary") {
      add(TheoremId::corollary_i);
      add(TheoremId::corollary_ii);
      add(TheoremId::corollary_iii);
    } else if (name == "corollary-i") {
      add(TheoremId::corollary_i);
    } else if (name == "corollary-ii") {
      add(TheoremId::corollary_ii);
    } else if (name == "corollary-iii") {
      add(TheoremId::corollary_iii);
    } else if (name == "dichotomy") {
      add(TheoremId::dichotomy);
    } else if (auto id = theorem_from_string(name)) {
      add(*id);
    } else {
      throw parse_error("unknown theorem '" + name + "'");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

EnumerationMode parse_mode(const CommonOptions& o) {
  if (o.mode == "exhaustive") return Exhaustive{};
  if (o.mode != "sampled") throw parse_error("unknown --mode '" + o.mode + "' (exhaustive|sampled)");
  if (o.seed_opt->count() == 0) throw parse_error("sampled mode requires an explicit --seed");
  if (o.samples_opt->count() == 0 || o.samples == 0)
    throw parse_error("sampled mode requires --samples N with N > 0");
  return Sampled{o.samples, o.seed};
}

std::unique_ptr<DiskCache> open_cache(const CommonOptions& o, const CliEnvironment& env,
                                      std::ostream& err) {
  const std::string dir = o.cache_dir.empty() ? env.cache_dir : o.cache_dir;
  if (dir.empty()) return nullptr;
  return std::make_unique<DiskCache>(dir, std::string(kToolVersion), &err);
}

void finish_manifest(RunManifest& m, Clock::time_point start, const DiskCache* cache,
                     std::ostream& err) {
  m.wall_clock_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (cache) {
    m.cache_hits = cache->hits();
    m.cache_misses = cache->misses();
    m.cache_corrupt = cache->corrupt();
  }
  err << m.run_stats_json().dump() << '\n';
}

std::string single_group(const CommonOptions& o) {
  std::string spec = o.group.empty() ? o.groups : o.group;
  if (spec.empty()) throw parse_error("a group spec is required");
  const auto list = expand_group_list(spec);
  if (list.size() != 1) throw parse_error("this command takes exactly one group, got '" + spec + "'");
  return list.front();
}

std::string set_text(const CommonOptions& o) {
  const std::string s = o.set.empty() ? o.set_flag : o.set;
  if (s.empty()) throw parse_error("a subset spec is required (e.g. \"{0,1,6,7}\")");
  return s;
}

GroupOptions group_options(const CommonOptions& o) { return GroupOptions{o.wide}; }

std::string flags_of(const CellRecord& c, bool kernel) {
  std::string f;
  f += kernel ? 'K' : '-';
  f += c.is_subgroup ? 'S' : '-';
  f += c.contains_identity ? 'I' : '-';
  return f;
}

int cmd_cells(const CommonOptions& o, std::optional<std::size_t> u_max_opt, std::ostream& out,
              std::ostream& err, const CliEnvironment& env) {
  const auto start = Clock::now();
  const auto format = parse_format(o.format, env);
  const auto mode = parse_mode(o);
  const auto g = build_group(single_group(o), group_options(o));
  const auto raw = parse_subset_spec(set_text(o), *g);
  if (raw.empty()) throw parse_error("S must be nonempty");
  const auto norm = normalize_s(raw);
  const ElementSet& s = norm.s;
  const std::size_t u_max = u_max_opt.value_or(s.size() - 1);

  auto cache = open_cache(o, env, err);
  EnumerationOptions eopts{o.enum_cap, o.jobs};
  const auto provider = make_cell_provider(cache.get(), eopts);
  const bool exhaustive = std::holds_alternative<Exhaustive>(mode);

  RunManifest manifest;
  manifest.command = "cells";
  manifest.groups = {g->label()};
  manifest.set_spec = raw.to_string();
  manifest.mode = exhaustive ? "exhaustive" : "sampled";
  manifest.u_max = u_max;
  if (!exhaustive) {
    manifest.samples = std::get<Sampled>(mode).count;
    manifest.seed = std::get<Sampled>(mode).seed;
  }

  const auto cells = exhaustive ? provider(s, u_max) : enumerate_cells(s, u_max, mode, eopts);
  std::map<std::size_t, KernelRecord> kernels;
  for (std::size_t u = 0; u <= u_max; ++u) kernels.emplace(u, kernels_at(s, u, cells));
  auto is_kernel = [&](const CellRecord& c) {
    const auto& k = kernels.at(c.deficiency).kernels;
    return !k.empty() && k.front().cell.size() == c.cell.size();
  };

  std::optional<BalandraudResult> bal;
  if (exhaustive) {
    const std::size_t need = s.size() >= 2 ? s.size() - 2 : 0;
    bal = need <= u_max ? balandraud_analysis(s, cells) : balandraud_analysis(s, provider(s, need));
  }

  if (format == ReportFormat::jsonl) {
    out << manifest.header_json().dump() << '\n';
    if (norm.shift != 0) {
      Json j;
      j["type"] = "normalized";
      j["S"] = raw.to_string();
      j["shift"] = norm.shift;
      j["normalized"] = s.to_string();
      out << j.dump() << '\n';
    }
    for (const auto& c : cells) out << cell_json(c, is_kernel(c)).dump() << '\n';
    for (const auto& [u, k] : kernels) {
      auto j = kernel_json(k);
      if (!exhaustive) j["complete"] = false;
      out << j.dump() << '\n';
    }
    if (bal) out << balandraud_json(s, *bal).dump() << '\n';
  } else if (format == ReportFormat::csv) {
    out << "# " << manifest.header_json().dump() << '\n';
    out << "mask,elements,size,deficiency,kernel,subgroup,contains_identity\n";
    for (const auto& c : cells)
      out << c.cell.to_hex() << ",\"" << c.cell.to_string() << "\"," << c.cell.size() << ','
          << c.deficiency << ',' << is_kernel(c) << ',' << c.is_subgroup << ','
          << c.contains_identity << '\n';
  } else {
    out << "group " << g->label() << "  S " << s.to_string() << "  umax " << u_max << "  mode "
        << manifest.mode << '\n';
    if (norm.shift != 0)
      out << "normalized " << raw.to_string() << " by right-translating with the inverse of "
          << norm.shift << '\n';
    out << std::left << std::setw(20) << "mask" << std::right << std::setw(6) << "size"
        << std::setw(4) << "u" << "  flags  elements\n";
    for (const auto& c : cells)
      out << std::left << std::setw(20) << c.cell.to_hex() << std::right << std::setw(6)
          << c.cell.size() << std::setw(4) << c.deficiency << "  " << flags_of(c, is_kernel(c))
          << "    " << c.cell.to_string() << '\n';
    out << "kernels:\n";
    for (const auto& [u, k] : kernels) {
      out << "  u=" << u << "  ";
      if (k.kernels.empty()) {
        out << "no cells\n";
        continue;
      }
      out << k.kernels.size() << " kernel(s) of size " << k.kernels.front().cell.size();
      if (k.unique_identity_kernel)
        out << ", unique identity kernel " << k.unique_identity_kernel->cell.to_string();
      else
        out << ", " << k.identity_kernel_count << " identity kernels";
      out << '\n';
    }
    if (bal)
      out << "H = " << bal->subgroup.to_string() << "  u* = "
          << (bal->u_star ? std::to_string(*bal->u_star) : std::string("none")) << "  ("
          << to_string(bal->branch) << ")\n";
  }
  finish_manifest(manifest, start, cache.get(), err);
  return kExitOk;
}

int cmd_subgroup(const CommonOptions& o, std::ostream& out, std::ostream& err,
                 const CliEnvironment& env) {
  const auto start = Clock::now();
  const auto format = parse_format(o.format, env);
  const auto g = build_group(single_group(o), group_options(o));
  const auto raw = parse_subset_spec(set_text(o), *g);
  if (raw.empty()) throw parse_error("S must be nonempty");
  const auto norm = normalize_s(raw);
  auto cache = open_cache(o, env, err);
  const auto provider = make_cell_provider(cache.get(), EnumerationOptions{o.enum_cap, o.jobs});
  const std::size_t need = norm.s.size() >= 2 ? norm.s.size() - 2 : 0;
  const auto bal = balandraud_analysis(norm.s, provider(norm.s, need));

  RunManifest manifest;
  manifest.command = "subgroup";
  manifest.groups = {g->label()};
  manifest.set_spec = raw.to_string();

  if (format == ReportFormat::table) {
    out << "group " << g->label() << "  S " << raw.to_string() << '\n';
    if (norm.shift != 0) out << "normalized S " << norm.s.to_string() << '\n';
    out << "H = " << bal.subgroup.to_string() << '\n';
    out << "u* = " << (bal.u_star ? std::to_string(*bal.u_star) : std::string("none")) << '\n';
    out << "branch = " << to_string(bal.branch) << '\n';
    if (bal.uniqueness_violation) out << "warning: identity kernel is not unique\n";
  } else {
    auto j = balandraud_json(norm.s, bal);
    if (norm.shift != 0) {
      j["input"] = raw.to_string();
      j["shift"] = norm.shift;
    }
    if (format == ReportFormat::csv) {
      out << "# " << manifest.header_json().dump() << '\n';
      out << "group,S,H,u_star,branch\n"
          << g->label() << ",\"" << norm.s.to_string() << "\",\"" << bal.subgroup.to_string()
          << "\"," << (bal.u_star ? std::to_string(*bal.u_star) : std::string()) << ','
          << to_string(bal.branch) << '\n';
    } else {
      out << manifest.header_json().dump() << '\n' << j.dump() << '\n';
    }
  }
  finish_manifest(manifest, start, cache.get(), err);
  return kExitOk;
}

int cmd_info(const CommonOptions& o, std::ostream& out, const CliEnvironment& env) {
  const auto format = parse_format(o.format, env);
  std::string spec = o.group.empty() ? o.groups : o.group;
  if (spec.empty()) throw parse_error("a group spec is required");
  for (const auto& one : expand_group_list(spec)) {
    const auto g = build_group(one, group_options(o));
    const auto subgroups = all_subgroups(*g);
    std::vector<std::size_t> subgroup_orders, element_orders;
    for (const auto& h : subgroups) subgroup_orders.push_back(h.size());
    for (Element e = 0; e < g->order(); ++e) element_orders.push_back(element_order(*g, e));
    if (format == ReportFormat::table) {
      out << g->label() << ": order " << g->order() << ", " << (is_abelian(*g) ? "abelian" : "nonabelian")
          << ", " << subgroups.size() << " subgroups\n";
      out << "  subgroup orders:";
      for (auto n : subgroup_orders) out << ' ' << n;
      out << "\n  element orders:";
      for (auto n : element_orders) out << ' ' << n;
      out << '\n';
    } else {
      Json j;
      j["type"] = "group";
      j["label"] = g->label();
      j["order"] = g->order();
      j["abelian"] = is_abelian(*g);
      j["subgroups"] = subgroups.size();
      j["subgroup_orders"] = subgroup_orders;
      j["element_orders"] = element_orders;
      out << j.dump() << '\n';
    }
  }
  return kExitOk;
}

void apply_config_file(const std::string& path, CommonOptions& o, VerifyOptions& v,
                       const CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open sweep config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw parse_error("malformed sweep config '" + path + "': " + e.what());
  }
  auto join = [](const Json& value) {
    if (value.is_string()) return value.get<std::string>();
    std::string s;
    for (const auto& item : value) s += (s.empty() ? "" : ",") + item.get<std::string>();
    return s;
  };
  auto unset = [&](const char* flag) { return cmd.get_option(flag)->count() == 0; };
  try {
    if (j.contains("groups") && unset("--groups")) o.groups = join(j["groups"]);
    if (j.contains("theorems") && unset("--theorem")) v.theorems = join(j["theorems"]);
    if (j.contains("set") && unset("--set")) o.set_flag = j["set"].get<std::string>();
    if (j.contains("smin") && unset("--smin")) v.s_min = j["smin"].get<std::size_t>();
    if (j.contains("smax") && unset("--smax")) v.s_max = j["smax"].get<std::size_t>();
    if (j.contains("mode") && unset("--mode")) o.mode = j["mode"].get<std::string>();
    if (j.contains("samples") && unset("--samples")) {
      o.samples = j["samples"].get<std::size_t>();
      o.samples_opt->add_result(std::to_string(o.samples));
    }
    if (j.contains("seed") && unset("--seed")) {
      o.seed = j["seed"].get<std::uint64_t>();
      o.seed_opt->add_result(std::to_string(o.seed));
    }
    if (j.contains("jobs") && unset("--jobs")) o.jobs = j["jobs"].get<unsigned>();
    if (j.contains("format") && unset("--format")) o.format = j["format"].get<std::string>();
    if (j.contains("emit") && unset("--emit")) v.emit = j["emit"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw parse_error("bad value in sweep config '" + path + "': " + e.what());
  }
}

int cmd_verify(CommonOptions& o, VerifyOptions& v, const CLI::App& cmd, std::ostream& out,
               std::ostream& err, const CliEnvironment& env) {
  const auto start = Clock::now();
  if (!v.config.empty()) apply_config_file(v.config, o, v, cmd);
  const auto format = parse_format(o.format, env);

  SweepConfig config;
  config.theorems = parse_theorems(v.theorems);
  if (config.theorems.empty()) throw parse_error("no theorems selected (use --theorem)");
  if (o.groups.empty()) o.groups = o.group;
  config.groups = expand_group_list(o.groups);
  config.mode = parse_mode(o);
  config.jobs = o.jobs;
  config.group_options = group_options(o);
  config.enumeration_cap = o.enum_cap;
  config.s_min = v.s_min;
  std::string set_spec = o.set_flag;
  if (set_spec.empty()) {
    config.s_source = AllSetsUpTo{v.s_max.value_or(kWideOrderCap)};
    set_spec = v.s_max ? "all:" + std::to_string(*v.s_max) : "all";
  } else {
    config.s_source = parse_subset_source(set_spec);
    if (v.s_max) {
      if (auto* a = std::get_if<AllSetsUpTo>(&config.s_source)) a->k = std::min(a->k, *v.s_max);
      if (auto* r = std::get_if<RandomSets>(&config.s_source)) r->k = std::min(r->k, *v.s_max);
    }
  }
  validate_config(config);

  std::string emit = v.emit.empty() ? (format == ReportFormat::table ? "notable" : "all") : v.emit;
  if (emit != "all" && emit != "notable" && emit != "none")
    throw parse_error("unknown --emit '" + emit + "' (all|notable|none)");

  RunManifest manifest;
  manifest.command = "verify";
  manifest.groups = config.groups;
  manifest.set_spec = set_spec;
  if (const auto* s = std::get_if<Sampled>(&config.mode)) {
    manifest.mode = "sampled";
    manifest.samples = s->count;
    manifest.seed = s->seed;
  }
  for (auto id : config.theorems) manifest.theorems.emplace_back(to_string(id));

  auto cache = open_cache(o, env, err);
  const auto provider =
      make_cell_provider(cache.get(), EnumerationOptions{config.enumeration_cap, 1});

  auto wanted = [&](const TheoremVerdict& verdict) {
    if (emit == "all") return true;
    if (emit == "none") return false;
    return verdict.status == Status::violated || verdict.status == Status::finding;
  };

  SweepCallbacks cb;
  if (format == ReportFormat::jsonl) {
    out << manifest.header_json().dump() << '\n';
    cb.on_notice = [&](const SweepNotice& n) { out << notice_json(n).dump() << '\n'; };
    cb.on_verdict = [&](const TheoremVerdict& verdict) {
      if (wanted(verdict)) out << verdict_json(verdict).dump() << '\n';
    };
  } else if (format == ReportFormat::table) {
    out << kToolName << ' ' << kToolVersion << " verify  groups " << o.groups << "  set " << set_spec
        << "  mode " << manifest.mode << '\n';
    cb.on_notice = [&](const SweepNotice& n) {
      out << "note: " << n.group << " " << to_string(n.theorem) << ": " << n.message << '\n';
    };
    cb.on_verdict = [&](const TheoremVerdict& verdict) {
      if (!wanted(verdict)) return;
      out << to_string(verdict.status) << ' ' << to_string(verdict.theorem) << ' ' << verdict.group;
      for (const auto& n : verdict.instance) out << ' ' << n.name << '=' << n.set.to_string();
      if (verdict.witness)
        out << "  [" << verdict.witness->relation << ": " << verdict.witness->lhs << " vs "
            << verdict.witness->rhs << "]";
      if (!verdict.hypothesis.empty()) out << "  (" << verdict.hypothesis << ")";
      out << '\n';
    };
  } else {
    out << "# " << manifest.header_json().dump() << '\n';
  }

  const auto summary = run_sweep(config, cb, provider);
  const int status = summary.violated() > 0 ? kExitViolation : kExitOk;

  if (format == ReportFormat::jsonl) {
    for (const auto& key : summary.order) {
      Json j;
      j["type"] = "summary";
      j["group"] = key.first;
      j["theorem"] = to_string(key.second);
      j.update(counts_json(summary.per_group.at(key)));
      out << j.dump() << '\n';
    }
    Json totals;
    totals["type"] = "totals";
    Json per = Json::object();
    for (const auto& [id, c] : summary.per_theorem) per[std::string(to_string(id))] = counts_json(c);
    totals["theorems"] = std::move(per);
    totals["exit_status"] = status;
    out << totals.dump() << '\n';
  } else if (format == ReportFormat::csv) {
    write_summary_csv(out, summary);
  } else {
    write_summary_table(out, summary);
    out << "result: " << (status == kExitOk ? "OK" : "VIOLATED") << " (" << summary.violated()
        << " violated)\n";
  }
  finish_manifest(manifest, start, cache.get(), err);
  return status;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool positional_set, bool sampling) {
  cmd->add_option("group", o.group, "Group spec: Z<n> | Z<a>xZ<b>... | D<n> | S<n> | Q8 | cayley:<path>");
  if (positional_set) cmd->add_option("S", o.set, "Subset spec: {i,j,...} or 0x<hex>");
  cmd->add_option("--groups", o.groups, "Group spec list, ranges allowed (Z2..Z10,D4,Q8)");
  cmd->add_option("--set", o.set_flag, "Subset spec: {i,j,...} | all:<k> | rand:<k>:<n>:<seed>");
  cmd->add_option("--format", o.format, "jsonl | csv | table (default: table on a terminal)");
  cmd->add_option("--cache-dir", o.cache_dir, "Cache directory (default: $CELLKIT_CACHE_DIR)");
  cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--wide", o.wide, "Allow groups up to order 1024 (multi-word bitmasks)");
  cmd->add_option("--enum-cap", o.enum_cap, "Largest group order for exhaustive cell enumeration");
  if (sampling) {
    cmd->add_option("--mode", o.mode, "exhaustive | sampled");
    o.samples_opt = cmd->add_option("--samples", o.samples, "Samples per instance in sampled mode");
    o.seed_opt = cmd->add_option("--seed", o.seed, "RNG seed (required in sampled mode)");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliEnvironment& env) {
  CLI::App app{"cellkit: cells, kernels and stabilizers of subsets of finite groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  CommonOptions cells_opts, subgroup_opts, info_opts, verify_opts;
  VerifyOptions verify_extra;
  std::optional<std::size_t> u_max;

  auto* cells = app.add_subcommand("cells", "Enumerate the cells of S with their kernels");
  add_common(cells, cells_opts, true, true);
  cells->add_option("--umax", u_max, "Largest deficiency to list (default |S|-1)");

  auto* subgroup = app.add_subcommand("subgroup", "Print the subgroup H(S) serving every T");
  add_common(subgroup, subgroup_opts, true, false);

  auto* info = app.add_subcommand("info", "Print group facts");
  add_common(info, info_opts, false, false);

  auto* verify = app.add_subcommand("verify", "Run theorem sweeps; exit 1 on any violation");
  add_common(verify, verify_opts, false, true);
  verify->add_option("--theorem", verify_extra.theorems,
                     "kneser,olson,lemma,chain,corollary,dichotomy or all");
  verify->add_option("--smin", verify_extra.s_min, "Smallest |S| for per-S theorems");
  verify->add_option("--smax", verify_extra.s_max, "Largest |S| for per-S theorems");
  verify->add_option("--emit", verify_extra.emit, "Verdict lines to print: all | notable | none");
  verify->add_option("--config", verify_extra.config, "JSON sweep config (flags override it)");

  std::vector<std::string> argv_storage{std::string(kToolName)};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cells) return cmd_cells(cells_opts, u_max, out, err, env);
    if (*subgroup) return cmd_subgroup(subgroup_opts, out, err, env);
    if (*info) return cmd_info(info_opts, out, env);
    if (*verify) return cmd_verify(verify_opts, verify_extra, *verify, out, err, env);
  } catch (const parse_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const validation_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const cap_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const contract_violation& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace cellkit
