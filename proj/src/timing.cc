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

#include "detal/timing.h"

#include <algorithm>
#include <chrono>
#include <cstdio>

namespace detal {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

PolicyTiming time_policy(PolicyId policy, const Pool& pool, const AcquisitionConfig& cfg,
                         const SelectionContext& ctx, std::size_t ub_steps) {
  PolicyTiming row;
  row.policy = policy;
  if (policy == PolicyId::kUbPairwise && ub_steps > 0) {
    const auto start = Clock::now();
    UbPairwiseSelector selector(pool, cfg, ctx.ub);
    const std::size_t target = selector.target();
    const std::size_t steps = std::min(ub_steps, target);
    for (std::size_t i = 0; i < steps; ++i) selector.step();
    row.measured_seconds = since(start);
    row.steps_timed = steps;
    row.selected = steps;
    row.extrapolated = steps < target;
    row.seconds = steps == 0 ? 0.0
                             : row.measured_seconds * static_cast<double>(target) /
                                   static_cast<double>(steps);
    return row;
  }
  const auto start = Clock::now();
  const AcquisitionResult result = run_policy(policy, pool, cfg, ctx);
  row.measured_seconds = since(start);
  row.seconds = row.measured_seconds;
  row.selected = result.selected.size();
  row.steps_timed = policy == PolicyId::kUbPairwise ? row.selected : 0;
  return row;
}

nlohmann::json to_json(const PolicyTiming& row) {
  return {{"policy", std::string(to_string(row.policy))},
          {"seconds", row.seconds},
          {"measured_seconds", row.measured_seconds},
          {"extrapolated", row.extrapolated},
          {"steps_timed", row.steps_timed},
          {"selected", row.selected}};
}

std::string timing_table(const std::vector<PolicyTiming>& rows) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-16s %14s %14s %9s %12s\n", "policy", "seconds",
                "measured_s", "selected", "extrapolated");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-16s %14.6g %14.6g %9zu %12s\n",
                  std::string(to_string(r.policy)).c_str(), r.seconds, r.measured_seconds,
                  r.selected, r.extrapolated ? "yes" : "no");
    out += line;
  }
  return out;
}

}  // namespace detal
