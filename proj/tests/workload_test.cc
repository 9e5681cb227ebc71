// Copyright 2026 The ppcs Authors
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

#include "ppcs/workload.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "ppcs/error.h"
#include "ppcs/file.h"
#include "ppcs/prng.h"
#include "test_util.h"

namespace ppcs {
namespace {

std::vector<std::string> universe(size_t n) {
  std::vector<std::string> u;
  for (size_t i = 0; i < n; ++i) u.push_back("k" + std::to_string(1000 + i));
  return u;
}

WorkloadSpec spec(Distribution d, uint64_t q, uint64_t seed, uint64_t batch = 1) {
  WorkloadSpec s;
  s.distribution = d;
  s.num_queries = q;
  s.seed = seed;
  s.batch_size = batch;
  return s;
}

// Frozen from an independent implementation of xoshiro256** with SplitMix64
// seeding (written from the published reference algorithms).
TEST(Prng, ReferenceStream) {
  Xoshiro256 a(0);
  EXPECT_EQ(a.next(), 0x99ec5f36cb75f2b4ULL);
  EXPECT_EQ(a.next(), 0xbf6e1f784956452aULL);
  EXPECT_EQ(a.next(), 0x1a5f849d4933e6e0ULL);
  Xoshiro256 b(42);
  EXPECT_EQ(b.next(), 0x15780b2e0c2ec716ULL);
  EXPECT_EQ(b.next(), 0x6104d9866d113a7eULL);
  EXPECT_EQ(b.next(), 0xae17533239e499a1ULL);
}

TEST(Prng, UnitInterval) {
  Xoshiro256 r(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(UniformDistinct, FrozenSequence) {
  EXPECT_EQ(sample_uniform_distinct_indices(spec(Distribution::kUniformDistinct, 5, 7), 10),
            (std::vector<size_t>{4, 6, 8, 0, 1}));
}

TEST(UniformDistinct, FullDrawIsPermutation) {
  const auto u = universe(50);
  auto s = sample_uniform_distinct(spec(Distribution::kUniformDistinct, 50, 1), u);
  std::sort(s.begin(), s.end());
  EXPECT_EQ(s, u);
}

TEST(UniformDistinct, DistinctAndDeterministic) {
  const auto u = universe(1000);
  const auto a = sample_uniform_distinct(spec(Distribution::kUniformDistinct, 300, 9), u);
  EXPECT_EQ(std::set<std::string>(a.begin(), a.end()).size(), 300u);
  EXPECT_EQ(a, sample_uniform_distinct(spec(Distribution::kUniformDistinct, 300, 9), u));
  EXPECT_NE(a, sample_uniform_distinct(spec(Distribution::kUniformDistinct, 300, 10), u));
}

TEST(UniformDistinct, EachKeyEquallyLikelyWithinThreeSigma) {
  const int trials = 10000;
  std::vector<int> counts(10, 0);
  for (int t = 0; t < trials; ++t) {
    ++counts[sample_uniform_distinct_indices(spec(Distribution::kUniformDistinct, 1, t), 10)[0]];
  }
  // Binomial oracle: mean np, sd sqrt(np(1-p)).
  const double mean = trials * 0.1;
  const double sd = std::sqrt(trials * 0.1 * 0.9);
  for (int c : counts) EXPECT_LE(std::abs(c - mean), 3 * sd) << c;
}

TEST(UniformDistinct, TooManyQueriesIsSpecError) {
  try {
    sample_uniform_distinct(spec(Distribution::kUniformDistinct, 11, 1), universe(10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSpec);
  }
}

TEST(PowerLaw, FrozenSequence) {
  EXPECT_EQ(sample_power_law_indices(spec(Distribution::kPowerLaw, 12, 7), 10),
            (std::vector<size_t>{8, 3, 9, 1, 7, 8, 3, 8, 8, 8, 8, 8}));
}

double rank1_oracle(size_t n) {
  double z = 0;
  for (size_t j = 1; j <= n; ++j) z += std::pow(static_cast<double>(j), -1.5);
  return 1.0 / z;
}

TEST(PowerLaw, TwoKeyRankOneProbability) {
  EXPECT_NEAR(rank1_oracle(2), 1.0 / (1.0 + 1.0 / (2.0 * std::sqrt(2.0))), 1e-15);
  EXPECT_NEAR(rank1_oracle(2), 0.7388, 1e-4);
  const auto d = sample_power_law_ranks(spec(Distribution::kPowerLaw, 100000, 5), 2);
  const double f = static_cast<double>(std::count(d.ranks.begin(), d.ranks.end(), 0u)) / 100000;
  EXPECT_NEAR(f, rank1_oracle(2), 0.01);
}

TEST(PowerLaw, RankOneFrequencyForHundredKeys) {
  const auto d = sample_power_law_ranks(spec(Distribution::kPowerLaw, 100000, 11), 100);
  const double f = static_cast<double>(std::count(d.ranks.begin(), d.ranks.end(), 0u)) / 100000;
  EXPECT_NEAR(f, rank1_oracle(100), 0.01);
  // The hottest key is the one the permutation assigns rank 1.
  const auto idx = sample_power_law_indices(spec(Distribution::kPowerLaw, 100000, 11), 100);
  std::vector<int> counts(100, 0);
  for (size_t i : idx) ++counts[i];
  EXPECT_EQ(static_cast<size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin()),
            d.permutation[0]);
}

TEST(PowerLaw, SingleKeyAndRepeats) {
  const auto u = universe(1);
  for (const auto& k : sample_power_law(spec(Distribution::kPowerLaw, 50, 1), u)) EXPECT_EQ(k, u[0]);
  // s = 2000 > n^(2/3) for n = 10000: repeats must occur.
  const auto s = sample_power_law(spec(Distribution::kPowerLaw, 2000, 3), universe(10000));
  EXPECT_LT(std::set<std::string>(s.begin(), s.end()).size(), s.size());
}

TEST(PowerLaw, EmptyUniverseIsSpecError) {
  EXPECT_THROW(sample_power_law(spec(Distribution::kPowerLaw, 1, 1), {}), Error);
}

TEST(MakeBatches, Chunks) {
  const auto u = universe(250);
  const auto b = make_batches(std::span<const std::string>(u), 100);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0].size(), 100u);
  EXPECT_EQ(b[2].size(), 50u);
  std::vector<std::string> joined;
  for (const auto& c : b) joined.insert(joined.end(), c.begin(), c.end());
  EXPECT_EQ(joined, u);
  EXPECT_EQ(make_batches(std::span<const std::string>(u), 1).size(), 250u);
  EXPECT_THROW(make_batches(std::span<const std::string>(u), 0), Error);
}

TEST(Workload, OrderedSortsTheSample) {
  auto s = spec(Distribution::kUniformDistinct, 100, 4);
  s.ordered = true;
  const auto w = generate_workload(s, universe(500));
  EXPECT_TRUE(std::is_sorted(w.begin(), w.end()));
}

TEST(WorkloadFile, SameSeedSameBytesAndRoundTrip) {
  testing::TempDir dir;
  const auto u = universe(300);
  auto s = spec(Distribution::kPowerLaw, 1000, 77, 100);
  save_workload(dir / "a.wl", s, u.size(), generate_workload(s, u));
  save_workload(dir / "b.wl", s, u.size(), generate_workload(s, u));
  EXPECT_EQ(read_file(dir / "a.wl"), read_file(dir / "b.wl"));
  const auto loaded = load_workload(dir / "a.wl");
  EXPECT_EQ(loaded.keys, generate_workload(s, u));
  EXPECT_EQ(loaded.universe_size, 300u);
  EXPECT_EQ(loaded.spec.seed, 77u);
  EXPECT_EQ(loaded.spec.batch_size, 100u);
  EXPECT_EQ(loaded.spec.distribution, Distribution::kPowerLaw);
  EXPECT_EQ(read_file(dir / "a.wl").rfind("# ppcs-workload v1 ", 0), 0u);
}

}  // namespace
}  // namespace ppcs
