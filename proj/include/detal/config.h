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

#ifndef DETAL_CONFIG_H_
#define DETAL_CONFIG_H_

#include <cstdint>

#include "detal/pool.h"
#include "detal/prototypes.h"
#include "json.hpp"

namespace detal {

struct AcquisitionConfig {
  double t_enms = 0.5;   // ENMS suppression threshold on cosine similarity
  double t_intra = 0.7;  // reject when intra-class redundancy reaches this
  double t_inter = 0.3;  // minority presence must exceed this
  double alpha = 0.5;    // fraction of classes treated as minority
  double beta = 0.75;    // fraction of the budget reserved for them
  int budget = 0;        // images acquired per cycle; must be set
  double score_floor = kDefaultScoreFloor;
  std::uint64_t seed = 0;
  PrototypeSource prototype_source = PrototypeSource::kAll;
  // When false, images are ranked by basic detection entropy instead of the
  // post-ENMS score.
  bool use_enms = true;
};

// Throws ValidationError naming the offending field.
void validate(const AcquisitionConfig& cfg);

// Flat JSON keys equal to the field names above.
nlohmann::json to_json(const AcquisitionConfig& cfg);
// Overlays keys present in `doc` onto `base`; unknown keys are rejected.
AcquisitionConfig apply_json(AcquisitionConfig base, const nlohmann::json& doc);

}  // namespace detal

#endif  // DETAL_CONFIG_H_
