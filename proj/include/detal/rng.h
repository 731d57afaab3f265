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

// The one random stream used by every randomized component: mt19937_64 with
// hand-written distributions, so that a seed means the same draws on every
// standard library (std:: distributions are implementation-defined).

#ifndef DETAL_RNG_H_
#define DETAL_RNG_H_

#include <cstdint>
#include <random>

namespace detal {

// splitmix64 finalizer; derives independent stream seeds from (seed, stream).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, n) by rejection; n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Standard normal via Box-Muller (one value per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace detal

#endif  // DETAL_RNG_H_
