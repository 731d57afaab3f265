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

// Wall-clock comparison of acquisition policies over one input.

#ifndef DETAL_TIMING_H_
#define DETAL_TIMING_H_

#include <cstddef>
#include <string>
#include <vector>

#include "detal/baselines.h"
#include "detal/config.h"
#include "detal/pool.h"
#include "detal/result.h"
#include "json.hpp"

namespace detal {

struct PolicyTiming {
  PolicyId policy = PolicyId::kDivproto;
  double seconds = 0.0;       // full acquisition, measured or extrapolated
  double measured_seconds = 0.0;
  bool extrapolated = false;
  std::size_t steps_timed = 0;  // greedy steps actually run (ub_pairwise only)
  std::size_t selected = 0;
};

// Times one policy end to end. For ub_pairwise with `ub_steps` > 0 only the
// first `ub_steps` greedy steps are run; every step repeats the same global
// pairwise pass, so the full cost is extrapolated linearly to the budget.
PolicyTiming time_policy(PolicyId policy, const Pool& pool, const AcquisitionConfig& cfg,
                         const SelectionContext& ctx, std::size_t ub_steps = 0);

nlohmann::json to_json(const PolicyTiming& row);
// Fixed-width table, one row per policy.
std::string timing_table(const std::vector<PolicyTiming>& rows);

}  // namespace detal

#endif  // DETAL_TIMING_H_
