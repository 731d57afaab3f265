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

// Comparison policies and the policy registry.

#ifndef DETAL_BASELINES_H_
#define DETAL_BASELINES_H_

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "detal/config.h"
#include "detal/pool.h"
#include "detal/result.h"

namespace detal {

// Uniform sample without replacement: a partial Fisher-Yates shuffle of the
// pool's file order driven by Rng(cfg.seed). Position i swaps with
// i + uniform_index(n - i) for i = 0..k-1.
AcquisitionResult random_select(const Pool& pool, const AcquisitionConfig& cfg);

// Top-b images by basic detection entropy; ties by ascending image_id.
AcquisitionResult entropy_topk_select(const Pool& pool, const AcquisitionConfig& cfg);

// Top-b images by post-ENMS entropy; ties by ascending image_id.
AcquisitionResult enms_only_select(const Pool& pool, const AcquisitionConfig& cfg);

// Unweighted mean of the instance features; the zero vector for an empty image.
std::vector<double> image_level_feature(const ImagePrediction& image, int feature_dim);

// Greedy k-center over image-level features with Euclidean distance. Images
// named in `initial_centers` act as centers and are never selected. With no
// centers at all the first pick is the image with the largest feature norm.
// Ties go to the smaller image_id.
AcquisitionResult coreset_kcenter_select(const Pool& pool, const AcquisitionConfig& cfg,
                                         const std::set<std::string>& initial_centers);
// Centers given as feature vectors (e.g. the labeled set, which is not in the pool).
AcquisitionResult coreset_kcenter_select(const Pool& pool, const AcquisitionConfig& cfg,
                                         std::span<const std::vector<double>> centers);

// min_dist[i] = min(min_dist[i], |points[i] - center|^2). OpenMP kernel and
// its serial reference.
void update_min_sq_distances(std::span<const std::vector<double>> points,
                             std::span<const double> center, std::span<double> min_dist);
void update_min_sq_distances_serial(std::span<const std::vector<double>> points,
                                    std::span<const double> center,
                                    std::span<double> min_dist);

// Naive global instance-pairwise selector, kept as a cost upper bound.
//
// Each step recomputes cosine similarity for every pair of instances in the
// pool, then picks the unselected image maximizing
//   basic_entropy - max similarity of its instances to selected instances
// (0 redundancy while nothing is selected; ties by ascending image_id).
// Quadratic in the total instance count per step.
inline constexpr std::size_t kUbGuardInstances = 10000;

struct UbOptions {
  bool force = false;  // run even above the guard
  std::size_t guard_instances = kUbGuardInstances;
};

class UbPairwiseSelector {
 public:
  // Throws ValidationError when the pool exceeds the guard and !force.
  UbPairwiseSelector(const Pool& pool, const AcquisitionConfig& cfg,
                     const UbOptions& options = {});

  // Selects one more image; false once the target size is reached.
  bool step();
  std::size_t target() const { return target_; }
  AcquisitionResult result() const { return result_; }
  // Largest cross-image instance similarity seen by the last step.
  double last_max_pair_similarity() const { return last_max_pair_similarity_; }

 private:
  const Pool& pool_;
  std::size_t target_ = 0;
  std::vector<double> entropy_;
  std::vector<double> unit_features_;  // row-major, one unit-norm row per instance
  std::vector<std::size_t> owner_;
  std::vector<char> selected_;
  int dim_ = 0;
  double last_max_pair_similarity_ = 0.0;
  AcquisitionResult result_;
};

AcquisitionResult ub_pairwise_select(const Pool& pool, const AcquisitionConfig& cfg,
                                     const UbOptions& options = {});

// Inputs some policies need beyond the pool and config.
struct SelectionContext {
  const ClassCounts* labeled_counts = nullptr;               // divproto
  std::span<const std::vector<double>> labeled_features;     // coreset_kcenter
  UbOptions ub;
};

AcquisitionResult run_policy(PolicyId policy, const Pool& pool,
                             const AcquisitionConfig& cfg, const SelectionContext& ctx);

}  // namespace detal

#endif  // DETAL_BASELINES_H_
