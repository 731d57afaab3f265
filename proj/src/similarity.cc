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

#include "detal/similarity.h"

#include <stdexcept>
#include <string>

namespace detal {

namespace {

template <typename T>
double cosine_impl(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine_similarity: dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  return cosine_with_sq_norms(a, b, squared_norm(a), squared_norm(b));
}

}  // namespace

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  return cosine_impl(a, b);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  return cosine_impl(a, b);
}

}  // namespace detal
