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

#include "detal/scoring.h"

#include <numeric>

#include <omp.h>

#include "detal/entropy.h"

namespace detal {

ImageAnalysis analyze_image(const ImagePrediction& image, const AcquisitionConfig& cfg) {
  ImageAnalysis out;
  out.basic_entropy = basic_image_entropy(image);
  if (cfg.use_enms) {
    out.score = enms_image(image, cfg.t_enms);
  } else {
    out.score.image_id = image.image_id;
    out.score.entropy_e = out.basic_entropy;
    out.score.retained.resize(image.instances.size());
    std::iota(out.score.retained.begin(), out.score.retained.end(), 0);
  }
  if (cfg.prototype_source == PrototypeSource::kEnmsRetained) {
    out.prototypes = image_prototypes(image, out.score.retained);
  } else {
    out.prototypes = image_prototypes(image);
  }
  return out;
}

std::vector<ImageAnalysis> analyze_pool(const Pool& pool, const AcquisitionConfig& cfg) {
  // Exceptions must not escape the parallel region; check inputs up front.
  if (!(cfg.t_enms >= -1.0 && cfg.t_enms <= 1.0)) {
    throw ValidationError("t_enms must lie in [-1, 1]");
  }
  validate_pool(pool);
  const auto n = static_cast<std::ptrdiff_t>(pool.images.size());
  std::vector<ImageAnalysis> out(pool.images.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = analyze_image(pool.images[i], cfg);
  }
  return out;
}

std::vector<ImageAnalysis> analyze_pool_serial(const Pool& pool,
                                               const AcquisitionConfig& cfg) {
  std::vector<ImageAnalysis> out;
  out.reserve(pool.images.size());
  for (const auto& image : pool.images) out.push_back(analyze_image(image, cfg));
  return out;
}

void set_thread_count(int n) {
  if (n >= 1) omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace detal
