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

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracle/reference.h"
#include "test_util.h"

namespace detal {
namespace {

using testing::make_image;
using testing::make_instance;

// Scalar evaluation without clamping, valid for p strictly inside (0, 1).
double open_interval_entropy(double p) {
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

TEST(InstanceEntropy, HalfIsLnTwo) {
  EXPECT_NEAR(instance_entropy(0.5), std::log(2.0), 1e-15);
  EXPECT_NEAR(instance_entropy(0.5), 0.693147, 1e-6);
}

TEST(InstanceEntropy, ZeroIsClampedNearZero) {
  EXPECT_GE(instance_entropy(0.0), 0.0);
  EXPECT_LE(instance_entropy(0.0), 3e-11);
  EXPECT_LE(instance_entropy(1.0), 3e-11);
}

TEST(InstanceEntropy, PointNine) {
  const double oracle = open_interval_entropy(0.9);
  EXPECT_NEAR(oracle, 0.325083, 1e-6);
  EXPECT_NEAR(instance_entropy(0.9), oracle, 1e-15);
}

TEST(InstanceEntropy, GridMatchesScalarOracle) {
  for (int i = 0; i <= 10; ++i) {
    const double p = i / 10.0;
    const double oracle = (i == 0 || i == 10) ? 0.0 : open_interval_entropy(p);
    EXPECT_NEAR(instance_entropy(p), oracle, 1e-10) << "p=" << p;
  }
}

TEST(InstanceEntropy, RejectsOutOfRange) {
  EXPECT_THROW(instance_entropy(-0.01), std::domain_error);
  EXPECT_THROW(instance_entropy(1.01), std::domain_error);
  EXPECT_THROW(instance_entropy(std::nan("")), std::domain_error);
}

TEST(InstanceEntropy, Symmetric) {
  for (int i = 0; i <= 1000; ++i) {
    const double p = i / 1000.0;
    EXPECT_NEAR(instance_entropy(p), instance_entropy(1.0 - p), 1e-12) << "p=" << p;
  }
}

TEST(InstanceEntropy, IncreasesTowardHalf) {
  double prev = instance_entropy(0.0);
  for (int i = 1; i <= 500; ++i) {
    const double cur = instance_entropy(i / 1000.0);
    EXPECT_LT(prev, cur) << "p=" << i / 1000.0;
    prev = cur;
  }
}

TEST(InstanceEntropy, BoundedByLnTwo) {
  for (int i = 0; i <= 1000; ++i) {
    const double h = instance_entropy(i / 1000.0);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log(2.0));
  }
}

TEST(BasicImageEntropy, TwoHalves) {
  const auto image = make_image("a", {make_instance(0, 0.5, {1.f}),
                                      make_instance(1, 0.5, {1.f})});
  EXPECT_NEAR(basic_image_entropy(image), 1.386294, 1e-6);
}

TEST(BasicImageEntropy, EmptyImageIsZero) {
  EXPECT_EQ(basic_image_entropy(make_image("a", {})), 0.0);
}

TEST(BasicImageEntropy, HalfAndPointNine) {
  const double oracle = open_interval_entropy(0.5) + open_interval_entropy(0.9);
  EXPECT_NEAR(oracle, 1.018230, 1e-6);
  const auto image = make_image("a", {make_instance(0, 0.5, {1.f}),
                                      make_instance(0, 0.9, {1.f})});
  EXPECT_NEAR(basic_image_entropy(image), oracle, 1e-15);
}

TEST(BasicImageEntropy, EqualsOrderedSumExactly) {
  std::mt19937_64 rng(7);
  reference::RandomPoolOptions opts;
  opts.num_images = 200;
  opts.max_instances = 20;
  opts.score_step = 0.0;
  const Pool pool = reference::random_pool(rng, opts);
  for (const auto& image : pool.images) {
    double sum = 0.0;
    for (const auto& inst : image.instances) sum += instance_entropy(inst.score);
    EXPECT_EQ(basic_image_entropy(image), sum) << image.image_id;
  }
}

TEST(InstanceEntropy, AgreesWithReference) {
  for (int i = 0; i <= 10000; ++i) {
    const double p = i / 10000.0;
    EXPECT_EQ(instance_entropy(p), reference::entropy(p)) << "p=" << p;
  }
}

}  // namespace
}  // namespace detal
