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

#include "detal/baselines.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <omp.h>

#include "detal/divproto.h"
#include "detal/entropy.h"
#include "detal/rng.h"
#include "detal/scoring.h"
#include "detal/similarity.h"

namespace detal {

namespace {

AcquisitionResult ranked_by(PolicyId policy, const Pool& pool,
                            const AcquisitionConfig& cfg, std::span<const double> key) {
  const std::size_t n = pool.images.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b]) return key[a] > key[b];
    return pool.images[a].image_id < pool.images[b].image_id;
  });
  AcquisitionResult result;
  result.policy = policy;
  result.budget_truncated = static_cast<std::size_t>(cfg.budget) > n;
  order.resize(std::min<std::size_t>(cfg.budget, n));
  for (std::size_t idx : order) {
    result.selected.push_back(pool.images[idx].image_id);
    AuditRecord rec;
    rec.image_id = pool.images[idx].image_id;
    rec.entropy_e = key[idx];
    rec.score = key[idx];
    result.audit.push_back(std::move(rec));
  }
  return result;
}

double sq_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Shared k-center loop. `excluded` marks pool images already acting as centers.
AcquisitionResult kcenter(const Pool& pool, const AcquisitionConfig& cfg,
                          std::span<const std::vector<double>> centers,
                          const std::vector<char>& excluded) {
  const std::size_t n = pool.images.size();
  std::vector<std::vector<double>> points(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    points[i] = image_level_feature(pool.images[i], pool.feature_dim);
  }

  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  for (const auto& c : centers) {
    if (static_cast<int>(c.size()) != pool.feature_dim) {
      throw ValidationError("k-center: center feature dimension mismatch");
    }
    update_min_sq_distances(points, c, min_dist);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (excluded[i]) update_min_sq_distances(points, points[i], min_dist);
  }

  const std::size_t available =
      n - static_cast<std::size_t>(std::count(excluded.begin(), excluded.end(), 1));
  AcquisitionResult result;
  result.policy = PolicyId::kCoresetKcenter;
  result.budget_truncated = static_cast<std::size_t>(cfg.budget) > available;
  const std::size_t target = std::min<std::size_t>(cfg.budget, available);
  std::vector<char> taken = excluded;
  bool have_center = !centers.empty() || available < n;

  while (result.selected.size() < target) {
    std::size_t best = n;
    double best_key = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double key = have_center ? min_dist[i] : l2_norm(std::span<const double>(points[i]));
      if (best == n || key > best_key ||
          (key == best_key && pool.images[i].image_id < pool.images[best].image_id)) {
        best = i;
        best_key = key;
      }
    }
    taken[best] = 1;
    result.selected.push_back(pool.images[best].image_id);
    AuditRecord rec;
    rec.image_id = pool.images[best].image_id;
    rec.score = have_center ? std::sqrt(best_key) : best_key;
    result.audit.push_back(std::move(rec));
    update_min_sq_distances(points, points[best], min_dist);
    have_center = true;
  }
  return result;
}

}  // namespace

AcquisitionResult random_select(const Pool& pool, const AcquisitionConfig& cfg) {
  validate(cfg);
  const std::size_t n = pool.images.size();
  const std::size_t k = std::min<std::size_t>(cfg.budget, n);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(cfg.seed);
  AcquisitionResult result;
  result.policy = PolicyId::kRandom;
  result.budget_truncated = static_cast<std::size_t>(cfg.budget) > n;
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
    result.selected.push_back(pool.images[idx[i]].image_id);
    AuditRecord rec;
    rec.image_id = pool.images[idx[i]].image_id;
    result.audit.push_back(std::move(rec));
  }
  return result;
}

AcquisitionResult entropy_topk_select(const Pool& pool, const AcquisitionConfig& cfg) {
  validate(cfg);
  validate_pool(pool);
  std::vector<double> key(pool.images.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(key.size()); ++i) {
    key[i] = basic_image_entropy(pool.images[i]);
  }
  return ranked_by(PolicyId::kEntropyTopk, pool, cfg, key);
}

AcquisitionResult enms_only_select(const Pool& pool, const AcquisitionConfig& cfg) {
  validate(cfg);
  AcquisitionConfig enms_cfg = cfg;
  enms_cfg.use_enms = true;
  const auto analyses = analyze_pool(pool, enms_cfg);
  std::vector<double> key(analyses.size());
  for (std::size_t i = 0; i < key.size(); ++i) key[i] = analyses[i].score.entropy_e;
  return ranked_by(PolicyId::kEnmsOnly, pool, cfg, key);
}

std::vector<double> image_level_feature(const ImagePrediction& image, int feature_dim) {
  std::vector<double> mean(feature_dim, 0.0);
  if (image.instances.empty()) return mean;
  for (const auto& inst : image.instances) {
    for (int i = 0; i < feature_dim; ++i) mean[i] += inst.feature[i];
  }
  for (double& v : mean) v /= static_cast<double>(image.instances.size());
  return mean;
}

void update_min_sq_distances(std::span<const std::vector<double>> points,
                             std::span<const double> center, std::span<double> min_dist) {
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    min_dist[i] = std::min(min_dist[i], sq_distance(points[i], center));
  }
}

void update_min_sq_distances_serial(std::span<const std::vector<double>> points,
                                    std::span<const double> center,
                                    std::span<double> min_dist) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    min_dist[i] = std::min(min_dist[i], sq_distance(points[i], center));
  }
}

AcquisitionResult coreset_kcenter_select(const Pool& pool, const AcquisitionConfig& cfg,
                                         const std::set<std::string>& initial_centers) {
  validate(cfg);
  validate_pool(pool);
  std::vector<char> excluded(pool.images.size(), 0);
  std::size_t found = 0;
  for (std::size_t i = 0; i < pool.images.size(); ++i) {
    if (initial_centers.contains(pool.images[i].image_id)) {
      excluded[i] = 1;
      ++found;
    }
  }
  if (found != initial_centers.size()) {
    throw ValidationError("k-center: initial center ids missing from the pool");
  }
  return kcenter(pool, cfg, {}, excluded);
}

AcquisitionResult coreset_kcenter_select(const Pool& pool, const AcquisitionConfig& cfg,
                                         std::span<const std::vector<double>> centers) {
  validate(cfg);
  validate_pool(pool);
  return kcenter(pool, cfg, centers, std::vector<char>(pool.images.size(), 0));
}

UbPairwiseSelector::UbPairwiseSelector(const Pool& pool, const AcquisitionConfig& cfg,
                                       const UbOptions& options)
    : pool_(pool), dim_(pool.feature_dim) {
  validate(cfg);
  validate_pool(pool);
  const std::size_t total = pool.total_instances();
  if (total > options.guard_instances && !options.force) {
    throw ValidationError("ub_pairwise: pool has " + std::to_string(pool.images.size()) +
                          " images / " + std::to_string(total) +
                          " instances, above the guard of " +
                          std::to_string(options.guard_instances) +
                          " instances; pass --force to run anyway");
  }
  const std::size_t n = pool.images.size();
  target_ = std::min<std::size_t>(cfg.budget, n);
  result_.policy = PolicyId::kUbPairwise;
  result_.budget_truncated = static_cast<std::size_t>(cfg.budget) > n;
  selected_.assign(n, 0);
  entropy_.resize(n);
  unit_features_.reserve(total * dim_);
  for (std::size_t i = 0; i < n; ++i) {
    entropy_[i] = basic_image_entropy(pool.images[i]);
    for (const auto& inst : pool.images[i].instances) {
      const std::span<const float> f(inst.feature);
      const double norm = l2_norm(f);
      for (float v : f) unit_features_.push_back(norm < kZeroNormEps ? 0.0 : v / norm);
      owner_.push_back(i);
    }
  }
}

bool UbPairwiseSelector::step() {
  if (result_.selected.size() >= target_) return false;
  const std::size_t n = pool_.images.size();
  const auto total = static_cast<std::ptrdiff_t>(owner_.size());
  const std::size_t dim = dim_;

  // Redundancy of every image against the selected set, from a full pass over
  // all instance pairs. Per-thread partial maxima are merged afterwards; max is
  // order-independent so the result does not depend on the schedule.
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  std::vector<double> redundancy(n, kNone);
  double global_max = kNone;
#pragma omp parallel
  {
    std::vector<double> local(n, kNone);
    double local_global = kNone;
#pragma omp for schedule(dynamic, 32)
    for (std::ptrdiff_t k = 0; k < total; ++k) {
      const double* fk = &unit_features_[k * dim];
      const std::size_t ok = owner_[k];
      for (std::ptrdiff_t l = k + 1; l < total; ++l) {
        const std::size_t ol = owner_[l];
        if (ok == ol) continue;
        const double* fl = &unit_features_[l * dim];
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        std::size_t i = 0;
        for (; i + 4 <= dim; i += 4) {
          s0 += fk[i] * fl[i];
          s1 += fk[i + 1] * fl[i + 1];
          s2 += fk[i + 2] * fl[i + 2];
          s3 += fk[i + 3] * fl[i + 3];
        }
        for (; i < dim; ++i) s0 += fk[i] * fl[i];
        const double sim = (s0 + s1) + (s2 + s3);
        local_global = std::max(local_global, sim);
        if (selected_[ok] && !selected_[ol]) local[ol] = std::max(local[ol], sim);
        if (selected_[ol] && !selected_[ok]) local[ok] = std::max(local[ok], sim);
      }
    }
#pragma omp critical
    {
      global_max = std::max(global_max, local_global);
      for (std::size_t i = 0; i < n; ++i) redundancy[i] = std::max(redundancy[i], local[i]);
    }
  }
  last_max_pair_similarity_ = global_max;

  std::size_t best = n;
  double best_key = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (selected_[i]) continue;
    const double key = entropy_[i] - (redundancy[i] == kNone ? 0.0 : redundancy[i]);
    if (best == n || key > best_key ||
        (key == best_key && pool_.images[i].image_id < pool_.images[best].image_id)) {
      best = i;
      best_key = key;
    }
  }
  selected_[best] = 1;
  result_.selected.push_back(pool_.images[best].image_id);
  AuditRecord rec;
  rec.image_id = pool_.images[best].image_id;
  rec.entropy_e = entropy_[best];
  rec.score = best_key;
  result_.audit.push_back(std::move(rec));
  return true;
}

AcquisitionResult ub_pairwise_select(const Pool& pool, const AcquisitionConfig& cfg,
                                     const UbOptions& options) {
  UbPairwiseSelector selector(pool, cfg, options);
  while (selector.step()) {
  }
  return selector.result();
}

AcquisitionResult run_policy(PolicyId policy, const Pool& pool,
                             const AcquisitionConfig& cfg, const SelectionContext& ctx) {
  switch (policy) {
    case PolicyId::kRandom: return random_select(pool, cfg);
    case PolicyId::kEntropyTopk: return entropy_topk_select(pool, cfg);
    case PolicyId::kEnmsOnly: return enms_only_select(pool, cfg);
    case PolicyId::kCoresetKcenter:
      return coreset_kcenter_select(pool, cfg, ctx.labeled_features);
    case PolicyId::kUbPairwise: return ub_pairwise_select(pool, cfg, ctx.ub);
    case PolicyId::kDivproto:
      if (ctx.labeled_counts == nullptr) {
        throw ValidationError("policy divproto requires labeled class counts");
      }
      return divproto_select(pool, *ctx.labeled_counts, cfg);
  }
  throw ValidationError("unknown policy");
}

}  // namespace detal
