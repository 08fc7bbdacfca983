// Copyright 2026 The spinctrl Authors
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

#include <gtest/gtest.h>

#include <cstdlib>
#include <set>
#include <stdexcept>

#include "spinctrl/parallel.hpp"

using namespace spinctrl;

TEST(Seeds, SplitMixReferenceValues) {
  // reference stream for seed 1234567 from the published splitmix64 generator
  SplitMix g(1234567);
  EXPECT_EQ(g.next(), 6457827717110365317ULL);
  EXPECT_EQ(g.next(), 3203168211198807973ULL);
}

TEST(Seeds, DerivedSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Seeds, UniformRange) {
  SplitMix g(9);
  for (int i = 0; i < 10000; ++i) {
    const double u = g.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(g.below(7), 7u);
  }
}

TEST(ParallelMap, IndependentOfWorkerCount) {
  const auto fn = [](std::size_t i) {
    SplitMix g(derive_seed(5, i));
    double s = 0;
    for (int k = 0; k < 100; ++k) s += g.uniform();
    return s;
  };
  const auto one = parallel_map(257, 1, fn);
  const auto four = parallel_map(257, 4, fn);
  EXPECT_EQ(one, four);
}

TEST(ParallelMap, PropagatesExceptions) {
  EXPECT_THROW(parallel_map(10, 3,
                            [](std::size_t i) -> int {
                              if (i == 6) throw std::runtime_error("boom");
                              return 0;
                            }),
               std::runtime_error);
}

TEST(ParallelMap, EmptyRange) {
  EXPECT_TRUE(parallel_map(0, 4, [](std::size_t i) { return i; }).empty());
}

TEST(Threads, ExplicitBeatsEnvironment) {
  setenv("SPINCTRL_THREADS", "3", 1);
  EXPECT_EQ(resolve_threads(2), 2);
  EXPECT_EQ(resolve_threads(0), 3);
  unsetenv("SPINCTRL_THREADS");
  EXPECT_GE(resolve_threads(0), 1);
}
