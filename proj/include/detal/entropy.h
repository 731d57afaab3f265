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

// Foreground-vs-background binary entropy of detections, in nats.

#ifndef DETAL_ENTROPY_H_
#define DETAL_ENTROPY_H_

#include "detal/pool.h"

namespace detal {

// Scores are clamped to [eps, 1 - eps] so that 0 * log(0) never appears.
inline constexpr double kEntropyClampEps = 1e-12;

// -p ln p - (1 - p) ln(1 - p). Throws std::domain_error for p outside [0, 1].
double instance_entropy(double p);

// Sum of instance entropies, accumulated in instance order. 0 for an empty image.
double basic_image_entropy(const ImagePrediction& image);

}  // namespace detal

#endif  // DETAL_ENTROPY_H_
