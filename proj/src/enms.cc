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

#include "detal/enms.h"

#include <algorithm>
#include <numeric>
#include <span>
#include <stdexcept>

#include "detal/entropy.h"
#include "detal/similarity.h"

namespace detal {

ImageScore enms_image(const ImagePrediction& image, double t_enms) {
  if (!(t_enms >= -1.0 && t_enms <= 1.0)) {
    throw std::invalid_argument("enms_image: t_enms must lie in [-1, 1]");
  }
  const auto& inst = image.instances;
  const std::size_t t = inst.size();

  std::vector<double> entropy(t);
  std::vector<double> sq_norm(t);
  for (std::size_t k = 0; k < t; ++k) {
    entropy[k] = instance_entropy(inst[k].score);
    sq_norm[k] = squared_norm(std::span<const float>(inst[k].feature));
  }

  // Entropies never change, so repeated argmax over the live set is the same
  // as walking a stable descending sort and skipping suppressed entries.
  std::vector<int> order(t);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return entropy[a] > entropy[b]; });

  std::vector<char> live(t, 1);
  ImageScore out;
  out.image_id = image.image_id;
  for (std::size_t pos = 0; pos < t; ++pos) {
    const int pick = order[pos];
    if (!live[pick]) continue;
    live[pick] = 0;
    out.entropy_e += entropy[pick];
    out.retained.push_back(pick);

    // Zero-norm features neither suppress nor get suppressed, whatever t_enms.
    if (is_zero_norm(sq_norm[pick])) continue;
    const std::span<const float> pick_feature(inst[pick].feature);
    for (std::size_t rest = pos + 1; rest < t; ++rest) {
      const int j = order[rest];
      if (!live[j] || inst[j].category != inst[pick].category) continue;
      if (is_zero_norm(sq_norm[j])) continue;
      const double sim = cosine_with_sq_norms(std::span<const float>(inst[j].feature),
                                              pick_feature, sq_norm[j], sq_norm[pick]);
      if (sim > t_enms) live[j] = 0;
    }
  }
  return out;
}

}  // namespace detal
