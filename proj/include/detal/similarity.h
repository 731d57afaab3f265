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

#ifndef DETAL_SIMILARITY_H_
#define DETAL_SIMILARITY_H_

#include <cmath>
#include <span>

namespace detal {

// Norms below this are treated as zero vectors: their similarity to anything is 0.
inline constexpr double kZeroNormEps = 1e-12;

// Sum of squares accumulated in double, in element order.
template <typename T>
double squared_norm(std::span<const T> v) {
  double ss = 0.0;
  for (T x : v) ss += static_cast<double>(x) * static_cast<double>(x);
  return ss;
}

template <typename T>
double l2_norm(std::span<const T> v) {
  return std::sqrt(squared_norm(v));
}

template <typename T>
double dot(std::span<const T> a, std::span<const T> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return s;
}

inline bool is_zero_norm(double sq_norm) {
  return std::sqrt(sq_norm) < kZeroNormEps;
}

// Cosine similarity given precomputed squared norms (from squared_norm).
// Bit-identical to cosine_similarity(a, b); the caller guarantees equal sizes.
// The denominator is sqrt(|a|^2 |b|^2) so that a vector compared with an
// exact copy of itself gives exactly 1 at any scale.
template <typename T>
double cosine_with_sq_norms(std::span<const T> a, std::span<const T> b,
                            double sq_a, double sq_b) {
  if (is_zero_norm(sq_a) || is_zero_norm(sq_b)) return 0.0;
  const double s = dot(a, b) / std::sqrt(sq_a * sq_b);
  return s > 1.0 ? 1.0 : (s < -1.0 ? -1.0 : s);
}

// a.b / (|a| |b|), clamped to [-1, 1]; 0 if either norm is below kZeroNormEps.
// Throws std::invalid_argument on a dimension mismatch.
double cosine_similarity(std::span<const float> a, std::span<const float> b);
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace detal

#endif  // DETAL_SIMILARITY_H_
