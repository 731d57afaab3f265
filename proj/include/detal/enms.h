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

// Entropy-based non-maximum suppression over the instances of one image.
//
// Instances are visited in order of decreasing entropy (ties: lower index
// first). Each visited instance contributes its entropy to the image score
// and suppresses every not-yet-visited instance of the same category whose
// feature cosine similarity to it is strictly greater than the threshold.
// Similarities are computed only against the current pick.

#ifndef DETAL_ENMS_H_
#define DETAL_ENMS_H_

#include <string>
#include <vector>

#include "detal/pool.h"

namespace detal {

struct ImageScore {
  std::string image_id;
  double entropy_e = 0.0;     // sum of retained instance entropies
  std::vector<int> retained;  // instance indices in pick order

  bool operator==(const ImageScore&) const = default;
};

// Throws std::invalid_argument if t_enms lies outside [-1, 1].
ImageScore enms_image(const ImagePrediction& image, double t_enms);

}  // namespace detal

#endif  // DETAL_ENMS_H_
