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

#include <benchmark/benchmark.h>

#include <vector>

#include "detal/baselines.h"
#include "detal/config.h"
#include "detal/divproto.h"
#include "detal/scoring.h"
#include "detal/simloop.h"

namespace {

using detal::AcquisitionConfig;
using detal::SimPool;
using detal::SimSpec;

SimPool make_sim(int num_images, int dim) {
  SimSpec spec;
  spec.num_images = num_images;
  spec.feature_dim = dim;
  spec.min_instances = 8;
  spec.max_instances = 8;
  spec.seed = 7;
  return detal::generate_pool(spec);
}

AcquisitionConfig make_cfg(std::size_t budget) {
  AcquisitionConfig cfg;
  cfg.budget = budget;
  return cfg;
}

void BM_AnalyzePoolSerial(benchmark::State& state) {
  const SimPool sim = make_sim(static_cast<int>(state.range(0)), 128);
  const AcquisitionConfig cfg = make_cfg(250);
  for (auto _ : state) benchmark::DoNotOptimize(detal::analyze_pool_serial(sim.pool, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AnalyzePoolSerial)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_AnalyzePool(benchmark::State& state) {
  const SimPool sim = make_sim(static_cast<int>(state.range(0)), 128);
  const AcquisitionConfig cfg = make_cfg(250);
  for (auto _ : state) benchmark::DoNotOptimize(detal::analyze_pool(sim.pool, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AnalyzePool)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

std::vector<std::vector<double>> image_points(const SimPool& sim, int dim) {
  std::vector<std::vector<double>> points;
  points.reserve(sim.pool.images.size());
  for (const auto& image : sim.pool.images) {
    points.push_back(detal::image_level_feature(image, dim));
  }
  return points;
}

template <bool kParallel>
void BM_KCenterUpdate(benchmark::State& state) {
  const SimPool sim = make_sim(static_cast<int>(state.range(0)), 128);
  const auto points = image_points(sim, 128);
  std::vector<double> min_dist(points.size(), 1e300);
  for (auto _ : state) {
    if constexpr (kParallel) {
      detal::update_min_sq_distances(points, points.front(), min_dist);
    } else {
      detal::update_min_sq_distances_serial(points, points.front(), min_dist);
    }
    benchmark::DoNotOptimize(min_dist.data());
  }
}
BENCHMARK(BM_KCenterUpdate<false>)->Arg(5000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_KCenterUpdate<true>)->Arg(5000)->Unit(benchmark::kMicrosecond);

void BM_DivprotoSelect(benchmark::State& state) {
  const SimPool sim = make_sim(static_cast<int>(state.range(0)), 128);
  const AcquisitionConfig cfg = make_cfg(250);
  detal::ClassCounts counts;
  counts.counts.assign(20, 0);
  for (std::size_t c = 0; c < counts.counts.size(); ++c) {
    counts.counts[c] = static_cast<std::int64_t>(100 / (c + 1));
  }
  for (auto _ : state) benchmark::DoNotOptimize(detal::divproto_select(sim.pool, counts, cfg));
}
BENCHMARK(BM_DivprotoSelect)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

// One greedy step of the pairwise upper bound; a full run is this times b.
void BM_UbStep(benchmark::State& state) {
  const SimPool sim = make_sim(static_cast<int>(state.range(0)), 128);
  const AcquisitionConfig cfg = make_cfg(250);
  detal::UbOptions options;
  options.force = true;
  for (auto _ : state) {
    state.PauseTiming();
    detal::UbPairwiseSelector selector(sim.pool, cfg, options);
    state.ResumeTiming();
    benchmark::DoNotOptimize(selector.step());
  }
}
BENCHMARK(BM_UbStep)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
