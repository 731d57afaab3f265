// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// detal: batch acquisition for detection active learning.
//
//   detal select   --pool p.jsonl --budget N [--policy divproto --labeled-stats s.json]
//   detal simulate --spec sim.json --policy P --cycles K --budget N
//   detal bench    (--pool p.jsonl | --spec sim.json) --policies a,b --budget N
//   detal stats    --selection r.json --pool p.jsonl [--ground-truth gt.json]
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid input or flags.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "detal/baselines.h"
#include "detal/config.h"
#include "detal/divproto.h"
#include "detal/pool.h"
#include "detal/result.h"
#include "detal/scoring.h"
#include "detal/simloop.h"
#include "detal/timing.h"
#include "json.hpp"

namespace {

using nlohmann::json;
using namespace detal;

constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;

// Acquisition flags shared by every subcommand. Unset flags leave the
// config-file (or default) value alone.
struct ConfigFlags {
  std::string config_path;
  std::optional<int> budget;
  std::optional<std::uint64_t> seed;
  std::optional<double> score_floor, t_enms, t_intra, t_inter, alpha, beta;
  std::optional<std::string> prototype_source;
  bool no_enms = false;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config with AcquisitionConfig keys");
    cmd->add_option("--budget", budget, "images to acquire per cycle");
    cmd->add_option("--seed", seed, "seed for randomized policies and the simulator");
    cmd->add_option("--score-floor", score_floor, "drop instances scoring below this");
    cmd->add_option("--t-enms", t_enms, "ENMS suppression threshold");
    cmd->add_option("--t-intra", t_intra, "intra-class redundancy threshold");
    cmd->add_option("--t-inter", t_inter, "minority presence threshold");
    cmd->add_option("--alpha", alpha, "fraction of classes treated as minority");
    cmd->add_option("--beta", beta, "budget fraction reserved for minority classes");
    cmd->add_option("--prototype-source", prototype_source, "all | enms_retained");
    cmd->add_flag("--no-enms", no_enms, "rank by basic entropy instead of ENMS");
    cmd->add_option("--threads", threads, "cap on worker threads");
  }

  AcquisitionConfig resolve(bool need_budget = true) const {
    AcquisitionConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw IoError("cannot open config " + config_path);
      try {
        cfg = apply_json(cfg, json::parse(in));
      } catch (const json::parse_error& e) {
        throw ValidationError(config_path + ": malformed JSON: " + e.what());
      }
    }
    if (budget) cfg.budget = *budget;
    if (seed) cfg.seed = *seed;
    if (score_floor) cfg.score_floor = *score_floor;
    if (t_enms) cfg.t_enms = *t_enms;
    if (t_intra) cfg.t_intra = *t_intra;
    if (t_inter) cfg.t_inter = *t_inter;
    if (alpha) cfg.alpha = *alpha;
    if (beta) cfg.beta = *beta;
    if (prototype_source) cfg.prototype_source = parse_prototype_source(*prototype_source);
    if (no_enms) cfg.use_enms = false;
    if (!need_budget && !budget && cfg.budget < 1) cfg.budget = 1;
    if (cfg.budget < 1) {
      throw ValidationError(budget ? "--budget must be >= 1" : "missing required flag --budget");
    }
    validate(cfg);
    return cfg;
  }
};

void require(bool present, const char* flag) {
  if (!present) throw ValidationError(std::string("missing required flag ") + flag);
}

PolicyId policy_from_flag(const std::string& name) {
  auto p = parse_policy(name);
  if (!p) throw ValidationError("unknown policy '" + name + "'");
  return *p;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": malformed JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

void write_json(const std::string& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

struct SelectArgs {
  ConfigFlags flags;
  std::string pool, labeled_stats, policy = "divproto", out, initial_centers;
  bool force = false;
};

int cmd_select(const SelectArgs& a) {
  require(!a.pool.empty(), "--pool");
  const AcquisitionConfig cfg = a.flags.resolve();
  const PolicyId policy = policy_from_flag(a.policy);
  set_thread_count(a.flags.threads);

  const LoadedPool loaded = load_pool(a.pool, cfg.score_floor);
  const Pool& pool = loaded.pool;
  json echo = {{"pool", a.pool}, {"dropped_below_floor", loaded.dropped_below_floor}};

  AcquisitionResult result;
  if (policy == PolicyId::kDivproto) {
    require(!a.labeled_stats.empty(), "--labeled-stats");
    const ClassCounts counts = load_labeled_stats(a.labeled_stats);
    echo["labeled_stats"] = a.labeled_stats;
    result = divproto_select(pool, counts, cfg);
  } else if (policy == PolicyId::kCoresetKcenter) {
    std::set<std::string> centers;
    if (!a.initial_centers.empty()) {
      for (const auto& id : read_json(a.initial_centers)) centers.insert(id.get<std::string>());
      echo["initial_centers"] = a.initial_centers;
    }
    result = coreset_kcenter_select(pool, cfg, centers);
  } else {
    SelectionContext ctx;
    ctx.ub.force = a.force;
    echo["force"] = a.force;
    result = run_policy(policy, pool, cfg, ctx);
  }
  write_json(a.out, to_json(result, cfg, echo));
  return 0;
}

struct SimulateArgs {
  ConfigFlags flags;
  std::string spec, policy = "divproto", out, csv, emit_pool, emit_ground_truth;
  std::optional<int> cycles;
  bool force = false;
};

int cmd_simulate(const SimulateArgs& a) {
  require(!a.spec.empty(), "--spec");
  require(a.cycles.has_value(), "--cycles");
  if (*a.cycles < 1) throw ValidationError("--cycles must be >= 1");
  const AcquisitionConfig cfg = a.flags.resolve();
  const PolicyId policy = policy_from_flag(a.policy);
  set_thread_count(a.flags.threads);

  SimSpec spec = load_sim_spec(a.spec);
  if (a.flags.seed) spec.seed = *a.flags.seed;

  if (!a.emit_pool.empty() || !a.emit_ground_truth.empty()) {
    const SimPool sim = generate_pool(spec);
    if (!a.emit_pool.empty()) save_pool(sim.pool, a.emit_pool);
    if (!a.emit_ground_truth.empty()) write_json(a.emit_ground_truth, ground_truth_to_json(sim));
  }
  RunOptions options;
  options.ub.force = a.force;
  const CycleReport report = run_cycles(spec, policy, cfg, *a.cycles, options);
  write_json(a.out, to_json(report));
  if (!a.csv.empty()) write_text(a.csv, cycles_csv(report));
  return 0;
}

struct BenchArgs {
  ConfigFlags flags;
  std::string pool, spec, labeled_stats, out;
  std::vector<std::string> policies;
  std::size_t ub_steps = 0;
  bool force = false;
};

int cmd_bench(const BenchArgs& a) {
  if (a.pool.empty() == a.spec.empty()) {
    throw ValidationError("bench needs exactly one of --pool or --spec");
  }
  require(!a.policies.empty(), "--policies");
  std::vector<PolicyId> policies;
  for (const auto& name : a.policies) policies.push_back(policy_from_flag(name));
  const AcquisitionConfig cfg = a.flags.resolve();
  set_thread_count(a.flags.threads);

  Pool pool;
  ClassCounts counts;
  std::vector<std::vector<double>> centers;
  json echo = to_json(cfg);
  if (!a.pool.empty()) {
    pool = load_pool(a.pool, cfg.score_floor).pool;
    echo["pool"] = a.pool;
    if (!a.labeled_stats.empty()) {
      counts = load_labeled_stats(a.labeled_stats);
      echo["labeled_stats"] = a.labeled_stats;
    } else {
      counts.counts.assign(pool.num_classes, 0);
    }
  } else {
    SimSpec spec = load_sim_spec(a.spec);
    if (a.flags.seed) spec.seed = *a.flags.seed;
    const SimPool sim = generate_pool(spec);
    SimSplit split = initial_split(spec, sim, cfg.score_floor);
    pool = std::move(split.unlabeled);
    counts = std::move(split.labeled_counts);
    centers = std::move(split.labeled_features);
    echo["spec"] = to_json(spec);
  }

  SelectionContext ctx;
  ctx.labeled_counts = &counts;
  ctx.labeled_features = centers;
  ctx.ub.force = a.force;
  std::vector<PolicyTiming> rows;
  json table = json::array();
  for (PolicyId p : policies) {
    rows.push_back(time_policy(p, pool, cfg, ctx, a.ub_steps));
    table.push_back(to_json(rows.back()));
  }
  echo["policies"] = a.policies;
  echo["ub_steps"] = a.ub_steps;
  echo["force"] = a.force;
  echo["threads"] = thread_count();
  std::cout << timing_table(rows);
  if (!a.out.empty()) {
    write_json(a.out, {{"images", pool.images.size()},
                       {"instances", pool.total_instances()},
                       {"timings", std::move(table)},
                       {"config_echo", std::move(echo)}});
  }
  return 0;
}

struct StatsArgs {
  ConfigFlags flags;
  std::string selection, pool, ground_truth, out;
};

int cmd_stats(const StatsArgs& a) {
  require(!a.selection.empty(), "--selection");
  require(!a.pool.empty(), "--pool");
  const AcquisitionConfig cfg = a.flags.resolve(/*need_budget=*/false);
  set_thread_count(a.flags.threads);
  const Pool pool = load_pool(a.pool, cfg.score_floor).pool;
  const auto ids = selected_ids_from_json(read_json(a.selection));
  std::optional<json> gt;
  if (!a.ground_truth.empty()) gt = read_json(a.ground_truth);
  const SelectionStats stats = selection_stats(pool, ids, cfg, gt ? &*gt : nullptr);
  json doc = to_json(stats);
  json echo = to_json(cfg);
  echo.erase("budget");
  echo["selection"] = a.selection;
  echo["pool"] = a.pool;
  if (gt) echo["ground_truth"] = a.ground_truth;
  doc["selected"] = ids.size();
  doc["config_echo"] = std::move(echo);
  write_json(a.out, doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch acquisition for detection active learning"};
  app.require_subcommand(1);

  SelectArgs sel;
  auto* select = app.add_subcommand("select", "choose images to label from a prediction pool");
  sel.flags.attach(select);
  select->add_option("--pool", sel.pool, "pool JSONL file");
  select->add_option("--labeled-stats", sel.labeled_stats, "labeled class counts JSON");
  select->add_option("--policy", sel.policy, "acquisition policy");
  select->add_option("--out", sel.out, "result JSON (stdout if omitted)");
  select->add_option("--initial-centers", sel.initial_centers,
                     "JSON array of pool ids used as k-center seeds");
  select->add_flag("--force", sel.force, "run ub_pairwise above its size guard");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run acquisition cycles on a synthetic pool");
  sim.flags.attach(simulate);
  simulate->add_option("--spec", sim.spec, "simulation spec JSON");
  simulate->add_option("--policy", sim.policy, "acquisition policy");
  simulate->add_option("--cycles", sim.cycles, "number of acquisition cycles");
  simulate->add_option("--out", sim.out, "cycle report JSON (stdout if omitted)");
  simulate->add_option("--csv", sim.csv, "per-cycle metrics CSV");
  simulate->add_option("--emit-pool", sim.emit_pool, "also write the generated pool JSONL");
  simulate->add_option("--emit-ground-truth", sim.emit_ground_truth,
                       "also write per-image ground-truth counts");
  simulate->add_flag("--force", sim.force, "run ub_pairwise above its size guard");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "time acquisition policies on one input");
  bench.flags.attach(bench_cmd);
  bench_cmd->add_option("--pool", bench.pool, "pool JSONL file");
  bench_cmd->add_option("--spec", bench.spec, "simulation spec JSON");
  bench_cmd->add_option("--labeled-stats", bench.labeled_stats, "labeled class counts JSON");
  bench_cmd->add_option("--policies", bench.policies, "comma-separated policy list")
      ->delimiter(',');
  bench_cmd->add_option("--ub-steps", bench.ub_steps,
                        "time only this many ub_pairwise steps and extrapolate (0 = full run)");
  bench_cmd->add_option("--out", bench.out, "timing JSON");
  bench_cmd->add_flag("--force", bench.force, "run ub_pairwise above its size guard");

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "class balance and prototype spread of a selection");
  st.flags.attach(stats);
  stats->add_option("--selection", st.selection, "result JSON from select");
  stats->add_option("--pool", st.pool, "pool JSONL file");
  stats->add_option("--ground-truth", st.ground_truth, "per-image ground-truth counts JSON");
  stats->add_option("--out", st.out, "metrics JSON (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (*select) return cmd_select(sel);
    if (*simulate) return cmd_simulate(sim);
    if (*bench_cmd) return cmd_bench(bench);
    if (*stats) return cmd_stats(st);
  } catch (const IoError& e) {
    std::cerr << "io-error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitInvalid;
}
