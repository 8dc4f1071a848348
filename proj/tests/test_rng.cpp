// Copyright 2026 The rlxkit Authors
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

#include "rlx/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

TEST(Rng, SameSeedSameStream) {
  rlx::Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformStaysInUnitInterval) {
  rlx::Rng r(7);
  for (int i = 0; i < 100000; ++i) {
    double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, NormalMomentsRoughlyStandard) {
  rlx::Rng r(3);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = r.normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(Rng, BoundedCoversRange) {
  rlx::Rng r(11);
  bool seen[5] = {false, false, false, false, false};
  for (int i = 0; i < 1000; ++i) {
    auto v = r.bounded(5);
    ASSERT_LT(v, 5u);
    seen[v] = true;
  }
  for (bool s : seen) EXPECT_TRUE(s);
}

TEST(Rng, DerivedSeedsDifferAcrossStreams) {
  const std::uint64_t master = 123;
  EXPECT_NE(rlx::derive_seed(master, rlx::SeedStream::kEnvBase),
            rlx::derive_seed(master, rlx::SeedStream::kNetworkInit));
  EXPECT_NE(rlx::derive_seed(master, rlx::SeedStream::kShuffle),
            rlx::derive_seed(master, rlx::SeedStream::kActionNoise));
  // stable across calls
  EXPECT_EQ(rlx::derive_seed(master, rlx::SeedStream::kEnvBase),
            rlx::derive_seed(master, rlx::SeedStream::kEnvBase));
}

}  // namespace
