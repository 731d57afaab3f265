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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "detal/baselines.h"
#include "detal/config.h"
#include "detal/divproto.h"
#include "detal/enms.h"
#include "detal/entropy.h"
#include "detal/prototypes.h"
#include "detal/scoring.h"
#include "detal/similarity.h"
#include "detal/simloop.h"
#include "detal/timing.h"
#include "oracle/reference.h"

namespace detal {
namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Counts violations and keeps the first few descriptions.
struct Tally {
  long checks = 0;
  long failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  std::string summary() const {
    std::string s = std::to_string(checks) + " checks, " + std::to_string(failures) + " violations";
    if (failures) s += " (first: " + first + ")";
    return s;
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

Pool random_image_pool(std::mt19937_64& rng, int images, int max_instances, int max_dim,
                       int max_classes) {
  reference::RandomPoolOptions opts;
  opts.num_images = images;
  opts.max_instances = max_instances;
  opts.feature_dim = 1 + static_cast<int>(rng() % max_dim);
  opts.num_classes = 2 + static_cast<int>(rng() % (max_classes - 1));
  opts.score_step = rng() % 2 ? 0.05 : 0.0;
  opts.duplicate_rate = 0.1 * static_cast<double>(rng() % 6);
  return reference::random_pool(rng, opts);
}

// Single-image ENMS against the literal loop.
Outcome enms_oracle_suite() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  const double thresholds[] = {-1.0, -0.3, 0.0, 0.3, 0.5, 0.7, 0.9, 1.0};
  Tally t;
  int images = 0;
  while (images < 500) {
    const Pool pool = random_image_pool(rng, 10, 20, 16, 6);
    for (const auto& image : pool.images) {
      if (images == 500) break;
      ++images;
      const double th = thresholds[rng() % 8];
      const auto oracle = reference::enms(image, th);
      const ImageScore got = enms_image(image, th);
      t.expect(got.retained == oracle.picks && got.entropy_e == oracle.entropy_e,
               image.image_id + " t=" + std::to_string(th));
    }
  }
  const double secs = since(start);
  return {t.failures == 0 && secs < 10.0,
          std::to_string(images) + " images, " + t.summary() + fmt(", %.3f s (limit 10 s)", secs)};
}

Outcome divproto_oracle_suite() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2002);
  Tally t;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng() % 30);
    const Pool pool = random_image_pool(rng, n, 10, 8, 8);
    const ClassCounts counts = reference::random_counts(rng, pool.num_classes);
    const AcquisitionConfig cfg = reference::random_config(rng, n);
    t.expect(divproto_select(pool, counts, cfg) == reference::divproto(pool, counts, cfg),
             "pool " + std::to_string(i));
  }
  const double secs = since(start);
  return {t.failures == 0 && secs < 60.0,
          "100 pools, " + t.summary() + fmt(", %.3f s (limit 60 s)", secs)};
}

Outcome equation_suite() {
  std::mt19937_64 rng(3003);
  Tally entropy, convex, monotone, presence;

  for (int i = 0; i <= 10; ++i) {
    const double p = i / 10.0;
    const double oracle = (i == 0 || i == 10) ? 0.0 : -p * std::log(p) - (1 - p) * std::log(1 - p);
    entropy.expect(std::abs(instance_entropy(p) - oracle) <= 1e-10, fmt("p=%.1f", p));
  }

  while (convex.checks < 2000) {
    const Pool pool = random_image_pool(rng, 20, 12, 16, 5);
    for (const auto& image : pool.images) {
      for (const auto& proto : image_prototypes(image).by_class) {
        double total = 0.0;
        for (const auto& inst : image.instances) {
          if (inst.category == proto.category) total += instance_entropy(inst.score);
        }
        if (total < kPrototypeWeightEps) continue;
        std::vector<double> rebuilt(proto.vector.size(), 0.0);
        double wsum = 0.0;
        bool nonneg = true;
        for (const auto& inst : image.instances) {
          if (inst.category != proto.category) continue;
          const double w = instance_entropy(inst.score) / total;
          nonneg = nonneg && w >= 0.0;
          wsum += w;
          for (std::size_t d = 0; d < rebuilt.size(); ++d) rebuilt[d] += w * inst.feature[d];
        }
        double err = std::abs(wsum - 1.0);
        for (std::size_t d = 0; d < rebuilt.size(); ++d) {
          err = std::max(err, std::abs(rebuilt[d] - proto.vector[d]));
        }
        convex.expect(nonneg && err <= 1e-9, image.image_id + fmt(" err=%.3g", err));
      }
    }
  }

  // Growing selections. The first selected image holds every class, so the
  // set of shared classes is fixed for the whole trajectory.
  std::normal_distribution<double> g;
  auto random_set = [&](int classes, double keep, int dim) {
    PrototypeSet set;
    for (int c = 0; c < classes; ++c) {
      if (std::uniform_real_distribution<double>()(rng) >= keep) continue;
      Prototype p;
      p.category = c;
      p.vector.resize(dim);
      for (auto& x : p.vector) x = g(rng);
      p.sq_norm = squared_norm(std::span<const double>(p.vector));
      set.by_class.push_back(std::move(p));
    }
    return set;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const int classes = 2 + static_cast<int>(rng() % 7);
    const int dim = 2 + static_cast<int>(rng() % 8);
    const PrototypeSet cand = random_set(classes, 0.6, dim);
    std::vector<PrototypeSet> sel{random_set(classes, 1.0, dim)};
    SelectedPrototypeIndex index(classes);
    index.add(sel.back());
    double prev = intra_class_metric(cand, sel);
    bool ok = prev == index.intra_class_metric(cand);
    for (int grow = 0; grow < 10; ++grow) {
      sel.push_back(random_set(classes, 0.5, dim));
      const double cur = intra_class_metric(cand, sel);
      SelectedPrototypeIndex rebuilt(classes);
      for (const auto& s : sel) rebuilt.add(s);
      ok = ok && cur >= prev && cur == rebuilt.intra_class_metric(cand);
      prev = cur;
    }
    monotone.expect(ok, "trial " + std::to_string(trial));
  }

  while (presence.checks < 1000) {
    const Pool pool = random_image_pool(rng, 50, 10, 4, 8);
    for (const auto& image : pool.images) {
      if (presence.checks == 1000) break;
      QuotaLedger ledger;
      for (int c = 0; c < pool.num_classes; ++c) {
        if (rng() % 2) {
          ledger.minority.push_back(c);
          ledger.quotas[c] = 1;
        }
      }
      double brute = 0.0;
      for (int c : ledger.minority) {
        for (const auto& inst : image.instances) {
          brute = std::max(brute, (inst.category == c ? 1.0 : 0.0) * inst.score);
        }
      }
      presence.expect(inter_class_metric(image, ledger) == brute, image.image_id);
    }
  }

  const bool pass = !entropy.failures && !convex.failures && !monotone.failures &&
                    !presence.failures;
  return {pass, "entropy grid " + entropy.summary() + "; prototype weights " + convex.summary() +
                    "; redundancy growth " + monotone.summary() + "; minority presence " +
                    presence.summary()};
}

Outcome invariant_suite() {
  std::mt19937_64 rng(4004);
  Tally budget, threads, scale, dominance, idempotence;
  const int saved_threads = thread_count();

  for (int i = 0; i < 60; ++i) {
    const int n = 1 + static_cast<int>(rng() % 40);
    const Pool pool = random_image_pool(rng, n, 10, 12, 8);
    const ClassCounts counts = reference::random_counts(rng, pool.num_classes);
    const AcquisitionConfig cfg = reference::random_config(rng, n);
    SelectionContext ctx;
    ctx.labeled_counts = &counts;
    const std::string tag = "pool " + std::to_string(i);

    for (PolicyId p : kAllPolicies) {
      set_thread_count(1);
      const AcquisitionResult one = run_policy(p, pool, cfg, ctx);
      set_thread_count(8);
      const AcquisitionResult eight = run_policy(p, pool, cfg, ctx);
      threads.expect(to_json(one, cfg).dump() == to_json(eight, cfg).dump(),
                     tag + " " + std::string(to_string(p)));
      const std::set<std::string> unique(one.selected.begin(), one.selected.end());
      budget.expect(one.selected.size() == std::min<std::size_t>(cfg.budget, n) &&
                        unique.size() == one.selected.size(),
                    tag + " " + std::string(to_string(p)));
    }

    const auto base = divproto_select(pool, counts, cfg).selected;
    for (float lambda : {0.01f, 1.0f, 100.0f}) {
      Pool scaled = pool;
      for (auto& image : scaled.images) {
        for (auto& inst : image.instances) {
          for (float& v : inst.feature) v *= lambda;
        }
      }
      scale.expect(divproto_select(scaled, counts, cfg).selected == base,
                   tag + fmt(" divproto lambda=%g", lambda));
      for (std::size_t k = 0; k < pool.images.size(); ++k) {
        const ImageScore a = enms_image(pool.images[k], cfg.t_enms);
        const ImageScore b = enms_image(scaled.images[k], cfg.t_enms);
        scale.expect(a == ImageScore{a.image_id, b.entropy_e, b.retained},
                     tag + fmt(" enms lambda=%g", lambda));
      }
    }

    for (const auto& image : pool.images) {
      const ImageScore s = enms_image(image, cfg.t_enms);
      const double basic = basic_image_entropy(image);
      const bool suppressed = s.retained.size() < image.instances.size();
      dominance.expect(suppressed ? s.entropy_e < basic : std::abs(s.entropy_e - basic) <= 1e-12,
                       image.image_id);
      ImagePrediction kept{image.image_id, {}};
      std::vector<int> order = s.retained;
      std::sort(order.begin(), order.end());
      for (int k : order) {
        kept.instances.push_back(image.instances[k]);
        kept.instances.back().index = static_cast<int>(kept.instances.size()) - 1;
      }
      const ImageScore again = enms_image(kept, cfg.t_enms);
      idempotence.expect(again.retained.size() == kept.instances.size() &&
                             std::abs(again.entropy_e - s.entropy_e) <= 1e-12,
                         image.image_id);
    }
  }
  set_thread_count(saved_threads);
  const bool pass = !budget.failures && !threads.failures && !scale.failures &&
                    !dominance.failures && !idempotence.failures;
  return {pass, "budget " + budget.summary() + "; threads 1 vs 8 " + threads.summary() +
                    "; scale " + scale.summary() + "; dominance " + dominance.summary() +
                    "; idempotence " + idempotence.summary()};
}

Outcome class_balance_suite() {
  const auto start = Clock::now();
  int hybrid_wins = 0, entropy_div_wins = 0;
  std::string rows;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SimSpec spec;
    spec.num_classes = 20;
    spec.num_images = 5000;
    spec.skew = 1.5;
    spec.seed = seed;
    AcquisitionConfig cfg;
    cfg.budget = 250;
    cfg.seed = seed;
    AcquisitionConfig no_enms = cfg;
    no_enms.use_enms = false;
    auto final_sd = [&](PolicyId p, const AcquisitionConfig& c) {
      return run_cycles(spec, p, c, 3).cycles.back().acquired_class_count_stddev;
    };
    const double topk = final_sd(PolicyId::kEntropyTopk, cfg);
    const double div = final_sd(PolicyId::kDivproto, no_enms);
    const double hybrid = final_sd(PolicyId::kDivproto, cfg);
    entropy_div_wins += div <= topk;
    hybrid_wins += hybrid <= topk;
    rows += fmt(" [seed %.0f: entropy %.1f, entropy+divproto %.1f, enms+divproto %.1f]",
                static_cast<double>(seed), topk, div, hybrid);
  }
  const double secs = since(start);
  return {entropy_div_wins >= 4 && hybrid_wins >= 4 && secs < 300.0,
          "divproto<=entropy_topk on " + std::to_string(entropy_div_wins) +
              "/5 seeds, enms+divproto<=entropy_topk on " + std::to_string(hybrid_wins) +
              "/5 seeds" + fmt(", %.1f s (limit 300 s);", secs) + rows};
}

Outcome complexity_suite() {
  auto make = [](int n) {
    SimSpec spec;
    spec.num_images = n;
    spec.min_instances = 8;
    spec.max_instances = 8;
    spec.feature_dim = 128;
    spec.seed = 6;
    return spec;
  };
  AcquisitionConfig cfg;
  cfg.budget = 250;
  cfg.score_floor = 0.0;  // keep all 8 instances per image

  auto ub_time = [&](int n, std::size_t steps, PolicyTiming* div_out) {
    const SimSpec spec = make(n);
    const SimPool sim = generate_pool(spec);
    SimSplit split = initial_split(spec, sim, cfg.score_floor);
    SelectionContext ctx;
    ctx.labeled_counts = &split.labeled_counts;
    ctx.ub.force = true;
    if (div_out) *div_out = time_policy(PolicyId::kDivproto, split.unlabeled, cfg, ctx);
    return time_policy(PolicyId::kUbPairwise, split.unlabeled, cfg, ctx, steps);
  };

  PolicyTiming div;
  const PolicyTiming small = ub_time(500, 4, nullptr);
  const PolicyTiming large = ub_time(5000, 2, &div);
  const double ratio = large.seconds / div.seconds;
  // Per-step work is the same at every step, so the extrapolated totals scale
  // like the per-step times.
  const double slope = std::log(large.seconds / small.seconds) / std::log(5000.0 / 500.0);
  return {ratio >= 50.0 && slope >= 1.8,
          fmt("divproto %.3f s, ub_pairwise %.1f s extrapolated (%.3g x); ", div.seconds,
              large.seconds, ratio) +
              fmt("ub_pairwise n=500 %.3f s, n=5000 %.1f s, log-log slope %.2f (need >= 1.8)",
                  small.seconds, large.seconds, slope) +
              fmt("; ub steps timed %.0f and %.0f", static_cast<double>(small.steps_timed),
                  static_cast<double>(large.steps_timed))};
}

Outcome defaults_suite() {
  const AcquisitionConfig cfg = apply_json(AcquisitionConfig{}, nlohmann::json::object());
  AcquisitionConfig coco = cfg;
  coco.budget = 5914;
  const QuotaLedger ledger = build_minority_set(ClassCounts{std::vector<std::int64_t>(80, 0)}, coco);
  bool quotas = ledger.minority.size() == 40;
  for (int c : ledger.minority) quotas = quotas && ledger.quotas.at(c) == 110;
  const bool defaults = cfg.t_enms == 0.5 && cfg.t_intra == 0.7 && cfg.t_inter == 0.3 &&
                        cfg.alpha == 0.5 && cfg.beta == 0.75;
  return {defaults && quotas,
          fmt("t_enms %.2f t_intra %.2f t_inter %.2f alpha %.2f", cfg.t_enms, cfg.t_intra,
              cfg.t_inter, cfg.alpha) +
              fmt(" beta %.2f; C=80 b=5914 -> %.0f minority classes, quota %.0f", cfg.beta,
                  static_cast<double>(ledger.minority.size()),
                  static_cast<double>(ledger.quotas.begin()->second))};
}

}  // namespace
}  // namespace detal

int main() {
  using detal::Outcome;
  const std::pair<const char*, std::function<Outcome()>> checks[] = {
      {"AC1 enms oracle", detal::enms_oracle_suite},
      {"AC2 divproto oracle", detal::divproto_oracle_suite},
      {"AC3 equation units", detal::equation_suite},
      {"AC4 invariants", detal::invariant_suite},
      {"AC5 class balance", detal::class_balance_suite},
      {"AC6 complexity", detal::complexity_suite},
      {"AC7 defaults", detal::defaults_suite},
  };
  int failed = 0;
  for (const auto& [name, run] : checks) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
