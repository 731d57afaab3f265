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

#include "detal/simloop.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "detal/rng.h"
#include "detal/scoring.h"

namespace detal {

using nlohmann::json;

namespace {

constexpr std::uint64_t kCentroidStream = 0;
constexpr std::uint64_t kInitialLabeledStream = 0x1abe1ed;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string image_name(int i) {
  std::ostringstream os;
  os << "img" << std::setw(7) << std::setfill('0') << i;
  return os.str();
}

// Unit vector with a uniformly random direction.
std::vector<double> random_direction(Rng& rng, int dim) {
  std::vector<double> v(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : v) {
      x = rng.normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
  } while (norm < 1e-12);
  for (double& x : v) x /= norm;
  return v;
}

Pool cycle_pool(const SimPool& sim, std::span<const std::size_t> images, double sharpen,
                double score_floor) {
  Pool pool;
  pool.feature_dim = sim.pool.feature_dim;
  pool.num_classes = sim.pool.num_classes;
  pool.images.reserve(images.size());
  for (std::size_t idx : images) {
    ImagePrediction image = sim.pool.images[idx];
    for (std::size_t k = 0; k < image.instances.size(); ++k) {
      image.instances[k].score = sigmoid(sim.logits[idx][k] * sharpen);
    }
    apply_score_floor(image, score_floor);
    pool.images.push_back(std::move(image));
  }
  return pool;
}

std::map<int, double> dispersion_by_class(const std::vector<ImageAnalysis>& analyses) {
  std::map<int, std::vector<std::vector<double>>> grouped;
  for (const auto& a : analyses) {
    for (const auto& p : a.prototypes.by_class) grouped[p.category].push_back(p.vector);
  }
  std::map<int, double> out;
  for (const auto& [c, protos] : grouped) out[c] = prototype_dispersion(protos);
  return out;
}

json dispersion_json(const std::map<int, double>& d) {
  json out = json::object();
  for (const auto& [c, s] : d) out[std::to_string(c)] = s;
  return out;
}

// Random initial labeled set, independent of the policy. Ascending order.
std::vector<std::size_t> initial_labeled_indices(const SimSpec& spec, std::size_t n) {
  const auto initial =
      static_cast<std::size_t>(std::llround(spec.initial_labeled_fraction * static_cast<double>(n)));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(mix_seed(spec.seed, kInitialLabeledStream));
  for (std::size_t i = 0; i < initial; ++i) {
    std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
  }
  idx.resize(initial);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

SimSplit initial_split(const SimSpec& spec, const SimPool& sim, double score_floor) {
  const std::size_t n = sim.pool.images.size();
  SimSplit split;
  split.labeled = initial_labeled_indices(spec, n);
  std::vector<char> is_labeled(n, 0);
  for (std::size_t i : split.labeled) is_labeled[i] = 1;
  std::vector<std::size_t> remaining;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_labeled[i]) remaining.push_back(i);
  }
  split.unlabeled = cycle_pool(sim, remaining, 1.0, score_floor);
  split.labeled_counts = ground_truth_counts(sim, split.labeled);
  const Pool labeled_pool = cycle_pool(sim, split.labeled, 1.0, score_floor);
  for (const auto& image : labeled_pool.images) {
    split.labeled_features.push_back(image_level_feature(image, labeled_pool.feature_dim));
  }
  return split;
}

void validate(const SimSpec& s) {
  if (s.num_classes < 2) throw ValidationError("sim spec: num_classes must be >= 2");
  if (s.feature_dim < 1) throw ValidationError("sim spec: feature_dim must be >= 1");
  if (s.num_images < 1) throw ValidationError("sim spec: num_images must be >= 1");
  if (s.min_instances < 0 || s.max_instances < 1 || s.min_instances > s.max_instances) {
    throw ValidationError("sim spec: need 0 <= min_instances <= max_instances, max >= 1");
  }
  if (!(s.skew >= 0.0)) throw ValidationError("sim spec: skew must be >= 0");
  if (!(s.feature_noise >= 0.0)) throw ValidationError("sim spec: feature_noise must be >= 0");
  if (!(s.centroid_radius > 0.0)) throw ValidationError("sim spec: centroid_radius must be > 0");
  if (!(s.score_noise >= 0.0)) throw ValidationError("sim spec: score_noise must be >= 0");
  if (!(s.learning_effect >= 0.0)) throw ValidationError("sim spec: learning_effect must be >= 0");
  if (!(s.initial_labeled_fraction >= 0.0 && s.initial_labeled_fraction < 1.0)) {
    throw ValidationError("sim spec: initial_labeled_fraction must lie in [0, 1)");
  }
}

json to_json(const SimSpec& s) {
  return {{"num_classes", s.num_classes},
          {"feature_dim", s.feature_dim},
          {"num_images", s.num_images},
          {"min_instances", s.min_instances},
          {"max_instances", s.max_instances},
          {"skew", s.skew},
          {"centroid_radius", s.centroid_radius},
          {"feature_noise", s.feature_noise},
          {"score_bias", s.score_bias},
          {"score_slope", s.score_slope},
          {"score_noise", s.score_noise},
          {"learning_effect", s.learning_effect},
          {"initial_labeled_fraction", s.initial_labeled_fraction},
          {"seed", s.seed}};
}

SimSpec sim_spec_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("sim spec must be a JSON object");
  SimSpec s;
  for (const auto& [key, v] : doc.items()) {
    try {
      if (key == "num_classes") s.num_classes = v.get<int>();
      else if (key == "feature_dim") s.feature_dim = v.get<int>();
      else if (key == "num_images") s.num_images = v.get<int>();
      else if (key == "min_instances") s.min_instances = v.get<int>();
      else if (key == "max_instances") s.max_instances = v.get<int>();
      else if (key == "skew") s.skew = v.get<double>();
      else if (key == "centroid_radius") s.centroid_radius = v.get<double>();
      else if (key == "feature_noise") s.feature_noise = v.get<double>();
      else if (key == "score_bias") s.score_bias = v.get<double>();
      else if (key == "score_slope") s.score_slope = v.get<double>();
      else if (key == "score_noise") s.score_noise = v.get<double>();
      else if (key == "learning_effect") s.learning_effect = v.get<double>();
      else if (key == "initial_labeled_fraction") s.initial_labeled_fraction = v.get<double>();
      else if (key == "seed") s.seed = v.get<std::uint64_t>();
      else throw ValidationError("unknown sim spec key '" + key + "'");
    } catch (const json::type_error&) {
      throw ValidationError("sim spec key '" + key + "' has the wrong type");
    }
  }
  validate(s);
  return s;
}

SimSpec load_sim_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sim spec " + path.string());
  try {
    return sim_spec_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": malformed JSON: " + e.what());
  }
}

std::vector<double> class_frequencies(const SimSpec& spec) {
  std::vector<double> p(spec.num_classes);
  for (int c = 0; c < spec.num_classes; ++c) p[c] = std::pow(c + 1.0, -spec.skew);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return p;
}

SimPool generate_pool(const SimSpec& spec) {
  validate(spec);
  const int dim = spec.feature_dim;
  std::vector<std::vector<double>> centroids(spec.num_classes);
  {
    Rng rng(mix_seed(spec.seed, kCentroidStream));
    for (auto& c : centroids) {
      c = random_direction(rng, dim);
      for (double& x : c) x *= spec.centroid_radius;
    }
  }
  std::vector<double> cumulative = class_frequencies(spec);
  std::partial_sum(cumulative.begin(), cumulative.end(), cumulative.begin());

  SimPool sim;
  sim.pool.feature_dim = dim;
  sim.pool.num_classes = spec.num_classes;
  const int n = spec.num_images;
  sim.pool.images.resize(n);
  sim.logits.resize(n);
  sim.ground_truth.resize(n);

#pragma omp parallel for schedule(dynamic, 32)
  for (int i = 0; i < n; ++i) {
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(i) + 1));
    const int count = spec.min_instances +
                      static_cast<int>(rng.uniform_index(spec.max_instances - spec.min_instances + 1));
    ImagePrediction& image = sim.pool.images[i];
    image.image_id = image_name(i);
    for (int k = 0; k < count; ++k) {
      const double u = rng.uniform01();
      int cls = static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                 cumulative.begin());
      cls = std::min(cls, spec.num_classes - 1);
      const double spread = 2.0 * rng.uniform01();
      const auto dir = random_direction(rng, dim);
      InstancePrediction inst;
      inst.index = k;
      inst.category = cls;
      inst.feature.resize(dim);
      for (int d = 0; d < dim; ++d) {
        inst.feature[d] =
            static_cast<float>(centroids[cls][d] + spec.feature_noise * spread * dir[d]);
      }
      const double logit =
          spec.score_bias - spec.score_slope * spread + spec.score_noise * rng.normal();
      inst.score = sigmoid(logit);
      image.instances.push_back(std::move(inst));
      sim.logits[i].push_back(logit);
      sim.ground_truth[i].push_back(cls);
    }
  }
  return sim;
}

ClassCounts ground_truth_counts(const SimPool& sim, std::span<const std::size_t> images) {
  ClassCounts counts;
  counts.counts.assign(sim.pool.num_classes, 0);
  for (std::size_t idx : images) {
    for (int c : sim.ground_truth[idx]) ++counts.counts[c];
  }
  return counts;
}

json ground_truth_to_json(const SimPool& sim) {
  json images = json::object();
  for (std::size_t i = 0; i < sim.pool.images.size(); ++i) {
    std::map<int, int> tally;
    for (int c : sim.ground_truth[i]) ++tally[c];
    json counts = json::object();
    for (const auto& [c, k] : tally) counts[std::to_string(c)] = k;
    images[sim.pool.images[i].image_id] = std::move(counts);
  }
  return {{"num_classes", sim.pool.num_classes}, {"images", std::move(images)}};
}

double class_balance_stddev(const ClassCounts& counts) {
  const int c = counts.num_classes();
  if (c < 2) throw ValidationError("class_balance_stddev needs at least 2 classes");
  double mean = 0.0;
  for (auto v : counts.counts) mean += static_cast<double>(v);
  mean /= c;
  double ss = 0.0;
  for (auto v : counts.counts) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / c);
}

double prototype_dispersion(std::span<const std::vector<double>> prototypes) {
  if (prototypes.empty()) throw ValidationError("prototype_dispersion needs >= 1 prototype");
  const std::size_t dim = prototypes.front().size();
  std::vector<double> centroid(dim, 0.0);
  for (const auto& p : prototypes) {
    for (std::size_t i = 0; i < dim; ++i) centroid[i] += p[i];
  }
  for (double& v : centroid) v /= static_cast<double>(prototypes.size());
  double total = 0.0;
  for (const auto& p : prototypes) {
    double ss = 0.0;
    for (std::size_t i = 0; i < dim; ++i) ss += (p[i] - centroid[i]) * (p[i] - centroid[i]);
    total += std::sqrt(ss);
  }
  return total / static_cast<double>(prototypes.size());
}

CycleReport run_cycles(const SimSpec& spec, PolicyId policy, const AcquisitionConfig& cfg,
                       int cycles, const RunOptions& options) {
  if (cycles < 1) throw ValidationError("cycles must be >= 1");
  validate(cfg);
  const SimPool sim = generate_pool(spec);
  const std::size_t n = sim.pool.images.size();

  CycleReport report;
  report.policy = policy;
  report.spec = spec;
  report.cfg = cfg;

  std::vector<char> labeled(n, 0);
  for (std::size_t i : initial_labeled_indices(spec, n)) {
    labeled[i] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labeled[i]) report.initial_labeled.push_back(sim.pool.images[i].image_id);
  }

  std::unordered_map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < n; ++i) index_of.emplace(sim.pool.images[i].image_id, i);

  std::vector<std::size_t> acquired_all;
  for (int cycle = 1; cycle <= cycles; ++cycle) {
    std::vector<std::size_t> remaining, labeled_idx;
    for (std::size_t i = 0; i < n; ++i) (labeled[i] ? labeled_idx : remaining).push_back(i);
    if (remaining.empty()) {
      report.truncated = true;
      break;
    }
    const double fraction = static_cast<double>(labeled_idx.size()) / static_cast<double>(n);
    const double sharpen = 1.0 + spec.learning_effect * fraction;
    const Pool pool = cycle_pool(sim, remaining, sharpen, cfg.score_floor);

    AcquisitionConfig cycle_cfg = cfg;
    cycle_cfg.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(cycle));
    const ClassCounts labeled_counts = ground_truth_counts(sim, labeled_idx);
    std::vector<std::vector<double>> centers;
    if (policy == PolicyId::kCoresetKcenter) {
      const Pool labeled_pool = cycle_pool(sim, labeled_idx, sharpen, cfg.score_floor);
      for (const auto& image : labeled_pool.images) {
        centers.push_back(image_level_feature(image, labeled_pool.feature_dim));
      }
    }
    SelectionContext ctx;
    ctx.labeled_counts = &labeled_counts;
    ctx.labeled_features = centers;
    ctx.ub = options.ub;

    const auto start = std::chrono::steady_clock::now();
    AcquisitionResult result = run_policy(policy, pool, cycle_cfg, ctx);
    const auto stop = std::chrono::steady_clock::now();

    CycleMetrics m;
    m.cycle = cycle;
    m.acquisition_seconds = std::chrono::duration<double>(stop - start).count();
    m.budget_truncated = result.budget_truncated;
    m.selected = result.selected;

    Pool chosen;
    chosen.feature_dim = pool.feature_dim;
    chosen.num_classes = pool.num_classes;
    for (const auto& id : result.selected) {
      const std::size_t idx = index_of.at(id);
      if (labeled[idx]) throw std::logic_error("image selected twice: " + id);
      labeled[idx] = 1;
      acquired_all.push_back(idx);
      labeled_idx.push_back(idx);
      auto it = std::find_if(pool.images.begin(), pool.images.end(),
                             [&](const ImagePrediction& im) { return im.image_id == id; });
      chosen.images.push_back(*it);
    }
    if (!chosen.images.empty()) {
      m.prototype_dispersion = dispersion_by_class(analyze_pool(chosen, cfg));
    }
    m.labeled_counts = ground_truth_counts(sim, labeled_idx);
    m.acquired_counts = ground_truth_counts(sim, acquired_all);
    m.class_count_stddev = class_balance_stddev(m.labeled_counts);
    m.acquired_class_count_stddev = class_balance_stddev(m.acquired_counts);
    report.cycles.push_back(std::move(m));
  }
  return report;
}

json to_json(const CycleReport& report, bool include_timing) {
  json cycles = json::array();
  for (const auto& m : report.cycles) {
    json c = {{"cycle", m.cycle},
              {"selected", m.selected},
              {"budget_truncated", m.budget_truncated},
              {"class_count_stddev", m.class_count_stddev},
              {"acquired_class_count_stddev", m.acquired_class_count_stddev},
              {"prototype_dispersion", dispersion_json(m.prototype_dispersion)},
              {"labeled_counts", m.labeled_counts.counts},
              {"acquired_counts", m.acquired_counts.counts}};
    if (include_timing) c["acquisition_seconds"] = m.acquisition_seconds;
    cycles.push_back(std::move(c));
  }
  json echo = to_json(report.cfg);
  echo["policy"] = std::string(to_string(report.policy));
  echo["cycles"] = static_cast<int>(report.cycles.size());
  echo["spec"] = to_json(report.spec);
  return {{"policy", std::string(to_string(report.policy))},
          {"initial_labeled", report.initial_labeled},
          {"cycles", std::move(cycles)},
          {"truncated", report.truncated},
          {"config_echo", std::move(echo)}};
}

std::string cycles_csv(const CycleReport& report) {
  std::ostringstream os;
  os << "cycle,policy,selected,class_count_stddev,acquired_class_count_stddev,"
        "mean_prototype_dispersion,acquisition_seconds\n";
  for (const auto& m : report.cycles) {
    double mean_sigma = 0.0;
    for (const auto& [c, s] : m.prototype_dispersion) mean_sigma += s;
    if (!m.prototype_dispersion.empty()) mean_sigma /= m.prototype_dispersion.size();
    os << m.cycle << ',' << to_string(report.policy) << ',' << m.selected.size() << ','
       << m.class_count_stddev << ',' << m.acquired_class_count_stddev << ',' << mean_sigma
       << ',' << m.acquisition_seconds << '\n';
  }
  return os.str();
}

SelectionStats selection_stats(const Pool& pool, std::span<const std::string> selected,
                               const AcquisitionConfig& cfg, const json* ground_truth) {
  std::unordered_map<std::string_view, std::size_t> index_of;
  for (std::size_t i = 0; i < pool.images.size(); ++i) index_of.emplace(pool.images[i].image_id, i);

  Pool chosen;
  chosen.feature_dim = pool.feature_dim;
  chosen.num_classes = pool.num_classes;
  for (const auto& id : selected) {
    auto it = index_of.find(id);
    if (it == index_of.end()) {
      throw ValidationError("selected image '" + id + "' is not in the pool");
    }
    chosen.images.push_back(pool.images[it->second]);
  }

  SelectionStats stats;
  stats.class_histogram.counts.assign(pool.num_classes, 0);
  if (ground_truth != nullptr) {
    stats.from_ground_truth = true;
    const auto nc = ground_truth->find("num_classes");
    const auto images = ground_truth->find("images");
    if (nc == ground_truth->end() || images == ground_truth->end() || !images->is_object()) {
      throw ValidationError("ground truth needs 'num_classes' and an 'images' object");
    }
    if (nc->get<int>() != pool.num_classes) {
      throw ValidationError("ground truth class count does not match the pool");
    }
    for (const auto& id : selected) {
      auto entry = images->find(id);
      if (entry == images->end()) {
        throw ValidationError("no ground truth for selected image '" + id + "'");
      }
      const ClassCounts c = class_counts_from_json(*entry, pool.num_classes);
      for (int k = 0; k < pool.num_classes; ++k) stats.class_histogram.counts[k] += c.counts[k];
    }
  } else {
    for (const auto& image : chosen.images) {
      for (const auto& inst : image.instances) ++stats.class_histogram.counts[inst.category];
    }
  }
  if (pool.num_classes >= 2) stats.class_count_stddev = class_balance_stddev(stats.class_histogram);

  if (!chosen.images.empty()) {
    const auto analyses = analyze_pool(chosen, cfg);
    for (const auto& a : analyses) {
      for (const auto& p : a.prototypes.by_class) {
        stats.prototypes[p.category].emplace_back(a.prototypes.image_id, p.vector);
      }
    }
    stats.prototype_dispersion = dispersion_by_class(analyses);
  }
  return stats;
}

json to_json(const SelectionStats& stats) {
  json dump = json::object();
  for (const auto& [c, entries] : stats.prototypes) {
    json list = json::array();
    for (const auto& [id, v] : entries) list.push_back({{"image_id", id}, {"vector", v}});
    dump[std::to_string(c)] = std::move(list);
  }
  return {{"class_histogram", stats.class_histogram.counts},
          {"from_ground_truth", stats.from_ground_truth},
          {"class_count_stddev", stats.class_count_stddev},
          {"prototype_dispersion", dispersion_json(stats.prototype_dispersion)},
          {"prototypes", std::move(dump)}};
}

}  // namespace detal
