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

#include "ppcs/bloom.h"

#include <gtest/gtest.h>

#include <cmath>

#include "ppcs/error.h"

namespace ppcs {
namespace {

std::vector<uint64_t> hashes_for(const std::string& prefix, int n) {
  std::vector<uint64_t> h;
  for (int i = 0; i < n; ++i) h.push_back(bloom_hash(prefix + std::to_string(i)));
  return h;
}

TEST(BloomFilter, ProbeCountFromDensity) {
  const auto h = hashes_for("k", 100);
  EXPECT_EQ(BloomFilter::build(h, 10).num_probes(), 7u);  // round(10 ln 2) = round(6.93)
  EXPECT_EQ(BloomFilter::build(h, 1).num_probes(), 1u);
  EXPECT_EQ(BloomFilter::build(h, 100).num_probes(), 30u);
  EXPECT_GE(BloomFilter::build(h, 10).num_bits(), 1000u);
}

TEST(BloomFilter, NoFalseNegatives) {
  const auto h = hashes_for("present-", 100000);
  const auto f = BloomFilter::build(h, 10);
  for (int i = 0; i < 100000; ++i) {
    ASSERT_TRUE(f.may_contain("present-" + std::to_string(i))) << i;
  }
}

TEST(BloomFilter, FalsePositiveRateNearFormula) {
  const int n = 10000;
  const auto f = BloomFilter::build(hashes_for("in-", n), 10);
  int fp = 0;
  const int probes = 100000;
  for (int i = 0; i < probes; ++i) fp += f.may_contain("out-" + std::to_string(i)) ? 1 : 0;
  const double k = f.num_probes();
  const double oracle = std::pow(1.0 - std::exp(-k * n / static_cast<double>(f.num_bits())), k);
  EXPECT_NEAR(BloomFilter::expected_fp_rate(n, f.num_bits(), f.num_probes()), oracle, 1e-12);
  const double empirical = static_cast<double>(fp) / probes;
  EXPECT_LE(empirical, 2 * oracle);
  EXPECT_GE(empirical, oracle / 2);
}

TEST(BloomFilter, SerializeRoundTrip) {
  const auto f = BloomFilter::build(hashes_for("x", 500), 8);
  const auto g = BloomFilter::deserialize(f.serialize());
  EXPECT_EQ(g.serialize(), f.serialize());
  EXPECT_EQ(g.num_bits(), f.num_bits());
  for (int i = 0; i < 500; ++i) EXPECT_TRUE(g.may_contain("x" + std::to_string(i)));
}

TEST(BloomFilter, MalformedSectionIsFormatError) {
  std::string s = BloomFilter::build(hashes_for("x", 50), 10).serialize();
  for (const std::string& bad : {s.substr(0, 5), s.substr(0, s.size() - 1), s + "x"}) {
    try {
      BloomFilter::deserialize(bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kFormat);
    }
  }
}

TEST(BloomHash, StableValues) {
  // Persisted filters depend on these; computed by an independent
  // implementation of the same mixing steps.
  EXPECT_EQ(bloom_hash(""), 0xa9302b82e06284f8ULL);
  EXPECT_EQ(bloom_hash("a"), 0xc9bfd03f48888cafULL);
  EXPECT_EQ(bloom_hash(std::string_view("c\0main\0swh:1:cnt:0123456789abcdef", 33)), 0xa80d1af9f8b25794ULL);
}

}  // namespace
}  // namespace ppcs
