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

#include "detal/prototypes.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "detal/entropy.h"
#include "detal/similarity.h"

namespace detal {

std::string_view to_string(PrototypeSource source) {
  return source == PrototypeSource::kAll ? "all" : "enms_retained";
}

PrototypeSource parse_prototype_source(std::string_view text) {
  if (text == "all") return PrototypeSource::kAll;
  if (text == "enms_retained") return PrototypeSource::kEnmsRetained;
  throw ValidationError("unknown prototype source '" + std::string(text) +
                        "' (expected all | enms_retained)");
}

const Prototype* PrototypeSet::find(int category) const {
  auto it = std::lower_bound(
      by_class.begin(), by_class.end(), category,
      [](const Prototype& p, int c) { return p.category < c; });
  return (it != by_class.end() && it->category == category) ? &*it : nullptr;
}

namespace {

struct Accumulator {
  std::vector<double> weighted;
  std::vector<double> plain;
  double weight = 0.0;
  int members = 0;
};

}  // namespace

PrototypeSet image_prototypes(const ImagePrediction& image,
                              std::span<const int> members) {
  std::vector<int> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());

  std::map<int, Accumulator> acc;
  for (int k : sorted) {
    const auto& inst = image.instances[k];
    const double h = instance_entropy(inst.score);
    auto& a = acc[inst.category];
    if (a.members == 0) {
      a.weighted.assign(inst.feature.size(), 0.0);
      a.plain.assign(inst.feature.size(), 0.0);
    }
    for (std::size_t i = 0; i < inst.feature.size(); ++i) {
      const double f = inst.feature[i];
      a.weighted[i] += h * f;
      a.plain[i] += f;
    }
    a.weight += h;
    ++a.members;
  }

  PrototypeSet out;
  out.image_id = image.image_id;
  out.by_class.reserve(acc.size());
  for (auto& [category, a] : acc) {
    Prototype p;
    p.category = category;
    if (a.weight >= kPrototypeWeightEps) {
      p.vector = std::move(a.weighted);
      for (double& v : p.vector) v /= a.weight;
    } else {
      p.vector = std::move(a.plain);
      for (double& v : p.vector) v /= a.members;
    }
    p.sq_norm = squared_norm(std::span<const double>(p.vector));
    out.by_class.push_back(std::move(p));
  }
  return out;
}

PrototypeSet image_prototypes(const ImagePrediction& image) {
  std::vector<int> all(image.instances.size());
  std::iota(all.begin(), all.end(), 0);
  return image_prototypes(image, all);
}

}  // namespace detal
