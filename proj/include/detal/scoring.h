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

// Per-image scoring pass: basic entropy, ENMS score and class prototypes for
// every image of a pool. This is the data-parallel part of every policy.
//
// analyze_pool runs the map under OpenMP; analyze_pool_serial is the
// single-threaded reference it is tested against. Both produce identical
// output for any thread count because each image is scored independently and
// written to its own slot.

#ifndef DETAL_SCORING_H_
#define DETAL_SCORING_H_

#include <vector>

#include "detal/config.h"
#include "detal/enms.h"
#include "detal/pool.h"
#include "detal/prototypes.h"

namespace detal {

struct ImageAnalysis {
  double basic_entropy = 0.0;
  ImageScore score;  // entropy_e is the ranking key (basic entropy if !use_enms)
  PrototypeSet prototypes;

  bool operator==(const ImageAnalysis&) const = default;
};

ImageAnalysis analyze_image(const ImagePrediction& image, const AcquisitionConfig& cfg);

std::vector<ImageAnalysis> analyze_pool(const Pool& pool, const AcquisitionConfig& cfg);
std::vector<ImageAnalysis> analyze_pool_serial(const Pool& pool,
                                               const AcquisitionConfig& cfg);

// Caps the OpenMP team size used by the parallel kernels. n < 1 is ignored.
void set_thread_count(int n);
int thread_count();

}  // namespace detal

#endif  // DETAL_SCORING_H_
