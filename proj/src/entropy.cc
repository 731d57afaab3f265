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

#include "detal/entropy.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace detal {

double instance_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("instance_entropy: probability " + std::to_string(p) +
                            " outside [0, 1]");
  }
  const double q = std::clamp(p, kEntropyClampEps, 1.0 - kEntropyClampEps);
  return -q * std::log(q) - (1.0 - q) * std::log(1.0 - q);
}

double basic_image_entropy(const ImagePrediction& image) {
  double total = 0.0;
  for (const auto& inst : image.instances) total += instance_entropy(inst.score);
  return total;
}

}  // namespace detal
