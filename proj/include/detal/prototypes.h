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

// Entropy-weighted class prototypes of a single image:
//
//   proto_c = sum_k [c_k == c] H_k f_k / sum_k [c_k == c] H_k
//
// where H_k is the instance entropy. Uncertain instances pull the prototype
// toward themselves; near-certain ones barely contribute.

#ifndef DETAL_PROTOTYPES_H_
#define DETAL_PROTOTYPES_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detal/pool.h"

namespace detal {

// Which instances feed the prototypes: every instance, or only those kept by
// entropy-based NMS.
enum class PrototypeSource { kAll, kEnmsRetained };

std::string_view to_string(PrototypeSource source);
// Throws ValidationError for anything but "all" / "enms_retained".
PrototypeSource parse_prototype_source(std::string_view text);

// Denominators below this fall back to the unweighted class mean.
inline constexpr double kPrototypeWeightEps = 1e-12;

struct Prototype {
  int category = 0;
  std::vector<double> vector;
  double sq_norm = 0.0;  // squared_norm(vector)

  bool operator==(const Prototype&) const = default;
};

struct PrototypeSet {
  std::string image_id;
  std::vector<Prototype> by_class;  // ascending category, one per present class

  // nullptr when the image has no instance of `category`.
  const Prototype* find(int category) const;
  bool operator==(const PrototypeSet&) const = default;
};

PrototypeSet image_prototypes(const ImagePrediction& image);
// Restricted to the instances listed in `members` (any order).
PrototypeSet image_prototypes(const ImagePrediction& image,
                              std::span<const int> members);

}  // namespace detal

#endif  // DETAL_PROTOTYPES_H_
