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

#include "ppcs/tier_cache.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ppcs/error.h"
#include "test_util.h"

namespace ppcs {
namespace {

using namespace std::chrono_literals;

struct Fixture {
  testing::TempDir dir;
  std::unique_ptr<Engine> engine;
  SimulatedBackend backend{0ns, 1e12};

  explicit Fixture(std::optional<uint64_t> capacity = std::nullopt) {
    StoreConfig c;
    c.data_dir = dir.path();
    c.write_buffer_bytes = kMiB;
    c.target_block_size = 4 * kKiB;
    c.capacity_m = capacity;
    engine = Engine::open(c);
  }
};

PpcKey key(int i) { return derive_key("f" + std::to_string(i) + ".c", "swh:" + std::to_string(i)); }
std::string content(int i) { return "int x = " + std::to_string(i) + ";\n"; }

TEST(TieredCache, HitNeverTouchesBackend) {
  Fixture f;
  f.engine->put(key(1), content(1));
  f.backend.add("swh:1", content(1));
  TieredCache cache(*f.engine, f.backend, AdmissionPolicy::kAdmitAlways);
  const auto r = cache.get(key(1));
  EXPECT_EQ(r.value, content(1));
  EXPECT_EQ(r.source, Source::kCache);
  EXPECT_EQ(f.backend.fetch_count(), 0u);
}

TEST(TieredCache, MissFetchesOnceThenAdmits) {
  Fixture f;
  f.backend.add("swh:2", content(2));
  TieredCache cache(*f.engine, f.backend, AdmissionPolicy::kAdmitAlways);
  auto r = cache.get(key(2));
  EXPECT_EQ(r.value, content(2));
  EXPECT_EQ(r.source, Source::kBackend);
  EXPECT_EQ(f.backend.fetch_count(), 1u);
  r = cache.get(key(2));
  EXPECT_EQ(r.source, Source::kCache);
  EXPECT_EQ(f.backend.fetch_count(), 1u);
  EXPECT_EQ(cache.admissions(), 1u);
}

TEST(TieredCache, AdmitNeverKeepsForwarding) {
  Fixture f;
  f.backend.add("swh:3", content(3));
  TieredCache cache(*f.engine, f.backend, AdmissionPolicy::kAdmitNever);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(cache.get(key(3)).source, Source::kBackend);
  EXPECT_EQ(f.backend.fetch_count(), 3u);
  EXPECT_FALSE(f.engine->get(key(3)).has_value());
}

TEST(TieredCache, AbsentEverywhereIsOneProbe) {
  Fixture f;
  TieredCache cache(*f.engine, f.backend, AdmissionPolicy::kAdmitAlways);
  const auto r = cache.get(key(4));
  EXPECT_FALSE(r.value.has_value());
  EXPECT_EQ(r.source, Source::kBackend);
  EXPECT_EQ(f.backend.fetch_count(), 1u);
}

TEST(TieredCache, BackendFailureIsTierError) {
  Fixture f;
  f.backend.set_available(false);
  TieredCache cache(*f.engine, f.backend, AdmissionPolicy::kAdmitAlways);
  try {
    cache.get(key(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTier);
  }
  f.engine->put(key(5), content(5));
  EXPECT_EQ(cache.get(key(5)).value, content(5));  // hits still served
}

TEST(TieredCache, CountersAndConvergence) {
  Fixture f;
  for (int i = 0; i < 200; ++i) f.backend.add("swh:" + std::to_string(i), content(i));
  TieredCache cache(*f.engine, f.backend, AdmissionPolicy::kAdmitAlways);
  std::mt19937_64 rng(1);
  uint64_t misses = 0;
  for (int pass = 0; pass < 3; ++pass) {
    for (int j = 0; j < 200; ++j) {
      const int i = static_cast<int>(rng() % 200);
      const uint64_t before = f.backend.fetch_count();
      const auto r = cache.get(key(i));
      const uint64_t fetched = f.backend.fetch_count() - before;
      EXPECT_EQ(fetched, r.source == Source::kBackend ? 1u : 0u);
      misses += fetched;
    }
  }
  const auto rep = cache.hit_rate_report();
  EXPECT_EQ(rep.misses, misses);
  EXPECT_EQ(rep.hits + rep.misses, 600u);
  // A full pass over every key admits the rest; the next pass is all hits.
  for (int i = 0; i < 200; ++i) cache.get(key(i));
  cache.hit_rate_report(true);
  const uint64_t before = f.backend.fetch_count();
  for (int i = 0; i < 200; ++i) EXPECT_EQ(cache.get(key(i)).source, Source::kCache);
  EXPECT_EQ(f.backend.fetch_count(), before);
  const auto window = cache.hit_rate_report(true);
  EXPECT_EQ(window.hits, 200u);
  EXPECT_DOUBLE_EQ(window.hit_ratio, 1.0);
}

TEST(TieredCache, CapacityRejectionServesWithoutCaching) {
  Fixture f(kMiB);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 400; ++i) f.backend.add("swh:" + std::to_string(i), testing::random_bytes(rng, 8000));
  TieredCache cache(*f.engine, f.backend, AdmissionPolicy::kAdmitAlways);
  for (int i = 0; i < 400; ++i) ASSERT_TRUE(cache.get(key(i)).value.has_value());
  EXPECT_GT(cache.rejected_admissions(), 0u);
  EXPECT_EQ(cache.admissions() + cache.rejected_admissions(), 400u);
  EXPECT_LE(f.engine->stats().compressed_bytes, kMiB);
}

TEST(SimulatedBackend, ServiceTimeCoversLatencyAndBandwidth) {
  SimulatedBackend b(20ms, 1e6);  // 1 MB/s
  b.add("x", std::string(50000, 'a'));  // 50 ms transfer
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_TRUE(b.fetch("x").has_value());
  EXPECT_GE(std::chrono::steady_clock::now() - t0, 70ms);
}

TEST(SimulatedBackend, LoadsCorpusStream) {
  SimulatedBackend b(0ns, 1e12);
  std::istringstream in(R"({"id":"swh:1:cnt:aa","names":[["main.py",3]],"content":"cHJpbnQoKQ=="})");
  b.load_corpus(in);
  EXPECT_EQ(b.fetch("swh:1:cnt:aa"), "print()");
  EXPECT_FALSE(b.fetch("nope").has_value());
}

}  // namespace
}  // namespace ppcs
