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

// Synthetic prediction pools and a multi-cycle acquisition loop.
//
// Generative model: C class centroids are random points on a sphere of radius
// `centroid_radius`. Each image holds a uniform number of objects in
// [min_instances, max_instances]; object classes follow p(c) ~ (c + 1)^-skew.
// An object's feature is its centroid plus an isotropic offset of length
// feature_noise * s with s ~ U(0, 2), and its detection score is
//   sigmoid(score_bias - score_slope * s + score_noise * N(0, 1)),
// so atypical objects get less confident predictions. Every object yields one
// prediction of its true class; the score floor then drops weak ones.
// `learning_effect` sharpens all logits by (1 + learning_effect * labeled
// fraction) each cycle as a stand-in for retraining.

#ifndef DETAL_SIMLOOP_H_
#define DETAL_SIMLOOP_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "detal/baselines.h"
#include "detal/config.h"
#include "detal/pool.h"
#include "detal/result.h"
#include "json.hpp"

namespace detal {

struct SimSpec {
  int num_classes = 20;
  int feature_dim = 32;
  int num_images = 1000;
  int min_instances = 1;
  int max_instances = 8;
  double skew = 1.5;
  double centroid_radius = 1.0;
  double feature_noise = 0.6;
  double score_bias = 2.0;
  double score_slope = 2.0;
  double score_noise = 1.0;
  double learning_effect = 0.0;
  double initial_labeled_fraction = 0.05;
  std::uint64_t seed = 0;
};

void validate(const SimSpec& spec);
nlohmann::json to_json(const SimSpec& spec);
// Overlays keys present in `doc` onto the defaults; unknown keys are rejected.
SimSpec sim_spec_from_json(const nlohmann::json& doc);
SimSpec load_sim_spec(const std::filesystem::path& path);

// Normalized target class distribution, p(c) ~ (c + 1)^-skew.
std::vector<double> class_frequencies(const SimSpec& spec);

struct SimPool {
  Pool pool;                                   // every object, no score floor
  std::vector<std::vector<double>> logits;     // per image, per instance
  std::vector<std::vector<int>> ground_truth;  // true class of every object
};

// Deterministic for a given spec (any thread count).
SimPool generate_pool(const SimSpec& spec);

// The unlabeled side of the simulator's initial random split, floored and
// ready for acquisition, with what the labeled side contributes.
struct SimSplit {
  Pool unlabeled;
  ClassCounts labeled_counts;                       // ground truth
  std::vector<std::vector<double>> labeled_features;  // image-level, for k-center
  std::vector<std::size_t> labeled;                 // indices into SimPool
};
SimSplit initial_split(const SimSpec& spec, const SimPool& sim, double score_floor);

// Per-class ground-truth totals of the listed images.
ClassCounts ground_truth_counts(const SimPool& sim, std::span<const std::size_t> images);

// {"num_classes": C, "images": {"<image_id>": {"<category>": count}}}
nlohmann::json ground_truth_to_json(const SimPool& sim);

// Population standard deviation of the per-class counts. Needs >= 2 classes.
double class_balance_stddev(const ClassCounts& counts);

// Mean Euclidean distance of the prototypes to their centroid; 0 for one.
double prototype_dispersion(std::span<const std::vector<double>> prototypes);

struct CycleMetrics {
  int cycle = 0;
  std::vector<std::string> selected;
  bool budget_truncated = false;
  double class_count_stddev = 0.0;           // over the whole labeled set
  double acquired_class_count_stddev = 0.0;  // over everything acquired so far
  std::map<int, double> prototype_dispersion;  // this cycle's selection, per class
  double acquisition_seconds = 0.0;
  ClassCounts labeled_counts;
  ClassCounts acquired_counts;
};

struct CycleReport {
  PolicyId policy = PolicyId::kDivproto;
  SimSpec spec;
  AcquisitionConfig cfg;
  std::vector<std::string> initial_labeled;
  std::vector<CycleMetrics> cycles;
  bool truncated = false;  // pool ran out before all cycles ran
};

struct RunOptions {
  UbOptions ub;
};

// Acquires cfg.budget images per cycle from what is still unlabeled, labels
// them from ground truth and records metrics. Throws ValidationError if
// cycles < 1.
CycleReport run_cycles(const SimSpec& spec, PolicyId policy, const AcquisitionConfig& cfg,
                       int cycles, const RunOptions& options = {});

nlohmann::json to_json(const CycleReport& report, bool include_timing = true);
std::string cycles_csv(const CycleReport& report);

// Statistics of a finished selection over a pool.
struct SelectionStats {
  ClassCounts class_histogram;  // ground truth if given, else predicted instances
  bool from_ground_truth = false;
  double class_count_stddev = 0.0;
  std::map<int, double> prototype_dispersion;
  std::map<int, std::vector<std::pair<std::string, std::vector<double>>>> prototypes;
};

// `ground_truth` uses the ground_truth_to_json layout. Throws ValidationError
// when a selected id is not in the pool.
SelectionStats selection_stats(const Pool& pool, std::span<const std::string> selected,
                               const AcquisitionConfig& cfg,
                               const nlohmann::json* ground_truth = nullptr);
nlohmann::json to_json(const SelectionStats& stats);

}  // namespace detal

#endif  // DETAL_SIMLOOP_H_
