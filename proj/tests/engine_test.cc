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

#include "ppcs/engine.h"

#include <gtest/gtest.h>

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <random>
#include <thread>

#include "ppcs/error.h"
#include "ppcs/manifest.h"
#include "test_util.h"

namespace ppcs {
namespace {

using testing::TempDir;

StoreConfig small_config(const std::filesystem::path& dir) {
  StoreConfig c;
  c.data_dir = dir;
  c.codec = CodecSpec::zstd(3);
  c.target_block_size = 4 * kKiB;
  c.write_buffer_bytes = kMiB;
  c.max_wal_bytes = 64 * kMiB;
  c.compaction_threads = 3;
  c.target_table_bytes = 256 * kKiB;
  return c;
}

PpcKey key(int i) { return PpcKey{"c", "file" + std::to_string(i % 17), "id" + std::to_string(i)}; }

std::string value_for(int i, int version = 0) {
  std::string v = "v" + std::to_string(version) + ":" + std::to_string(i) + ":";
  while (v.size() < 200 + static_cast<size_t>(i % 300)) v += "abcdefgh"[i % 8];
  return v;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kPrecondition;
}

TEST(EngineConfig, Validation) {
  TempDir dir;
  auto c = small_config(dir.path());
  c.capacity_m = c.write_buffer_bytes - 1;
  EXPECT_EQ(code_of([&] { Engine::open(c); }), ErrorCode::kConfig);
  c = small_config(dir.path());
  c.write_buffer_bytes = kMiB - 1;
  EXPECT_EQ(code_of([&] { Engine::open(c); }), ErrorCode::kConfig);
  c = small_config(dir.path());
  c.compaction_threads = 0;
  EXPECT_EQ(code_of([&] { Engine::open(c); }), ErrorCode::kConfig);
}

TEST(EngineConfig, DefaultsFollowTuning) {
  StoreConfig c;
  EXPECT_EQ(c.write_buffer_bytes, 2 * kGiB);
  EXPECT_EQ(c.max_wal_bytes, 64 * kGiB);
  EXPECT_EQ(c.compaction_threads, 6);
  EXPECT_EQ(c.bits_per_key, 10.0);
}

TEST(Engine, EmptyStore) {
  TempDir dir;
  auto e = Engine::open(small_config(dir.path()));
  EXPECT_FALSE(e->get(key(1)).has_value());
  e->compact();  // no-op
  EXPECT_EQ(e->stats().entry_count, 0u);
  EXPECT_FALSE(e->stats().ratio.has_value());
  EXPECT_TRUE(e->multi_get({}).empty());
}

TEST(Engine, SecondOpenOfSameDirectoryFails) {
  TempDir dir;
  auto e = Engine::open(small_config(dir.path()));
  EXPECT_EQ(code_of([&] { Engine::open(small_config(dir.path())); }), ErrorCode::kIO);
}

TEST(Engine, PutGetOverwriteDelete) {
  TempDir dir;
  auto e = Engine::open(small_config(dir.path()));
  e->put(key(1), "v1");
  EXPECT_EQ(e->get(key(1)), "v1");
  e->put(key(1), "v2");
  EXPECT_EQ(e->get(key(1)), "v2");
  e->remove(key(1));
  EXPECT_FALSE(e->get(key(1)).has_value());
  e->remove(key(99));
  EXPECT_FALSE(e->get(key(99)).has_value());
  e->put(key(2), "");
  EXPECT_EQ(e->get(key(2)), "");
}

TEST(Engine, MemtableShadowsTables) {
  TempDir dir;
  auto e = Engine::open(small_config(dir.path()));
  e->put(key(1), "old");
  e->flush();
  e->put(key(1), "new");
  EXPECT_EQ(e->get(key(1)), "new");
  e->remove(key(1));
  EXPECT_FALSE(e->get(key(1)).has_value());
  e->flush();
  EXPECT_FALSE(e->get(key(1)).has_value());
}

TEST(Engine, CrashBeforeFlushKeepsAcknowledgedWrites) {
  TempDir dir;
  const pid_t pid = ::fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    auto e = Engine::open(small_config(dir.path()));
    for (int i = 0; i < 1000; ++i) e->put(key(i), value_for(i));
    ::kill(::getpid(), SIGKILL);  // no close, no flush
    ::_exit(1);
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  ASSERT_TRUE(WIFSIGNALED(status));
  auto e = Engine::open(small_config(dir.path()));
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(e->get(key(i)), value_for(i)) << i;
}

TEST(Engine, TornWalTailWarnsAndKeepsPrefix) {
  TempDir dir;
  {
    auto e = Engine::open(small_config(dir.path()));
    for (int i = 0; i < 10; ++i) e->put(key(i), value_for(i));
  }
  std::filesystem::path wal;
  for (const auto& f : std::filesystem::directory_iterator(dir.path())) {
    if (f.path().extension() == ".log") wal = f.path();
  }
  std::filesystem::resize_file(wal, std::filesystem::file_size(wal) - 5);
  auto e = Engine::open(small_config(dir.path()));
  ASSERT_EQ(e->recovery_warnings().size(), 1u);
  for (int i = 0; i < 9; ++i) EXPECT_EQ(e->get(key(i)), value_for(i));
  EXPECT_FALSE(e->get(key(9)).has_value());
}

TEST(Engine, CorruptManifestIsRecoveryError) {
  TempDir dir;
  { Engine::open(small_config(dir.path())); }
  std::ofstream(dir / "MANIFEST", std::ios::trunc) << "not a manifest\n";
  EXPECT_EQ(code_of([&] { Engine::open(small_config(dir.path())); }), ErrorCode::kRecovery);
}

TEST(Engine, ReopenAfterFlushAndCompact) {
  TempDir dir;
  {
    auto e = Engine::open(small_config(dir.path()));
    for (int i = 0; i < 5000; ++i) e->put(key(i), value_for(i));
    e->flush();
    e->compact();
    for (int i = 0; i < 100; ++i) e->put(key(i), value_for(i, 1));
  }
  auto e = Engine::open(small_config(dir.path()));
  for (int i = 0; i < 5000; ++i) ASSERT_EQ(e->get(key(i)), value_for(i, i < 100 ? 1 : 0));
  EXPECT_EQ(e->live_keys().size(), 5000u);
  EXPECT_EQ(e->stats().entry_count, 5100u);  // 100 newer versions still in the memtable
}

TEST(Engine, CompactionKeepsValuesAndDisjointL1) {
  TempDir dir;
  auto e = Engine::open(small_config(dir.path()));
  std::mt19937_64 rng(1);
  std::map<std::string, std::string> model;
  for (int round = 0; round < 6; ++round) {
    for (int j = 0; j < 1500; ++j) {
      const int i = static_cast<int>(rng() % 4000);
      if (rng() % 10 == 0) {
        e->remove(key(i));
        model.erase(encode(key(i)));
      } else {
        e->put(key(i), value_for(i, round));
        model[encode(key(i))] = value_for(i, round);
      }
    }
    e->flush();
  }
  e->compact();
  const auto tables = e->tables();
  for (const auto& t : tables) EXPECT_EQ(t.level, 1);
  for (size_t i = 1; i < tables.size(); ++i) {
    EXPECT_LT(tables[i - 1].table->largest_key(), tables[i].table->smallest_key());
  }
  // Scan-all oracle: the union of table scans is exactly the model.
  std::map<std::string, std::string> scanned;
  for (const auto& t : tables) {
    for (auto& entry : t.table->scan_all()) {
      ASSERT_TRUE(entry.value.has_value()) << "tombstone survived bottom-level compaction";
      scanned[entry.key] = *entry.value;
    }
  }
  EXPECT_EQ(scanned, model);
  EXPECT_EQ(e->live_keys().size(), model.size());
}

TEST(Engine, DeletedKeyLeavesNoTraceAfterCompaction) {
  TempDir dir;
  auto e = Engine::open(small_config(dir.path()));
  for (int i = 0; i < 50; ++i) e->put(key(i), value_for(i));
  e->flush();
  e->remove(key(7));
  e->flush();
  e->compact();
  for (const auto& t : e->tables()) {
    for (const auto& entry : t.table->scan_all()) EXPECT_NE(entry.key, encode(key(7)));
  }
}

TEST(Engine, CompactingOverwritesDoesNotGrow) {
  TempDir dir;
  auto e = Engine::open(small_config(dir.path()));
  for (int round = 0; round < 4; ++round) {
    for (int i = 0; i < 1000; ++i) e->put(key(i), value_for(i, round));
    e->flush();
  }
  const uint64_t before = e->stats().compressed_bytes;
  e->compact();
  EXPECT_LE(e->stats().compressed_bytes, before);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(e->get(key(i)), value_for(i, 3));
}

TEST(Engine, SortedBulkLoadIsMovedNotRewritten) {
  TempDir dir;
  auto e = Engine::open(small_config(dir.path()));
  for (int i = 0; i < 20; ++i) e->put_encoded("a" + std::to_string(100 + i), "x");
  e->flush();
  for (int i = 0; i < 20; ++i) e->put_encoded("b" + std::to_string(100 + i), "y");
  e->flush();
  const auto before = e->tables();
  e->compact();
  const auto after = e->tables();
  ASSERT_EQ(after.size(), 2u);
  for (const auto& t : after) EXPECT_EQ(t.level, 1);
  // Same table objects: nothing was recompressed.
  EXPECT_TRUE(std::any_of(before.begin(), before.end(),
                          [&](const auto& b) { return b.table == after[0].table; }));
}

TEST(Engine, MultiGetMatchesGetLoop) {
  TempDir dir;
  auto e = Engine::open(small_config(dir.path()));
  for (int i = 0; i < 3000; ++i) e->put(key(i), value_for(i));
  e->flush();
  for (int i = 0; i < 3000; i += 3) e->put(key(i), value_for(i, 1));
  e->flush();
  for (int i = 0; i < 3000; i += 5) e->remove(key(i));
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> keys;
    for (int j = 0; j < 100; ++j) keys.push_back(encode(key(static_cast<int>(rng() % 3300))));
    const auto got = e->multi_get(keys);
    ASSERT_EQ(got.size(), keys.size());
    for (size_t j = 0; j < keys.size(); ++j) EXPECT_EQ(got[j], e->get_encoded(keys[j]));
  }
}

TEST(Engine, SortedBatchReadsNoMoreBlocksThanShuffled) {
  TempDir dir;
  auto e = Engine::open(small_config(dir.path()));
  for (int i = 0; i < 3000; ++i) e->put(key(i), value_for(i));
  e->flush();
  e->compact();
  std::mt19937_64 rng(3);
  std::vector<std::string> keys;
  for (int j = 0; j < 100; ++j) keys.push_back(encode(key(static_cast<int>(rng() % 3000))));
  auto blocks_for = [&](const std::vector<std::string>& ks) {
    const uint64_t before = e->stats().blocks_read;
    e->multi_get(ks);
    return e->stats().blocks_read - before;
  };
  auto sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  auto shuffled = keys;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EXPECT_LE(blocks_for(sorted), blocks_for(shuffled));
}

TEST(Engine, CapacityLimitRejectsOverflowingPut) {
  TempDir dir;
  auto c = small_config(dir.path());
  c.capacity_m = kMiB;
  auto e = Engine::open(c);
  std::mt19937_64 rng(4);
  int accepted = 0;
  bool rejected = false;
  for (int i = 0; i < 10000 && !rejected; ++i) {
    const std::string v = testing::random_bytes(rng, 4000);  // incompressible
    try {
      e->put(key(i), v);
      ++accepted;
    } catch (const Error& err) {
      ASSERT_EQ(err.code(), ErrorCode::kCapacity);
      rejected = true;
      EXPECT_FALSE(e->get(key(i)).has_value());  // store unchanged
    }
    ASSERT_LE(e->stats().compressed_bytes, kMiB);
  }
  EXPECT_TRUE(rejected);
  EXPECT_GT(accepted, 100);
  EXPECT_LT(accepted, 300);
}

TEST(Engine, MmapReadsGiveSameResults) {
  TempDir dir;
  {
    auto e = Engine::open(small_config(dir.path()));
    for (int i = 0; i < 2000; ++i) e->put(key(i), value_for(i));
    e->flush();
  }
  auto c = small_config(dir.path());
  c.use_mmap_reads = true;
  auto e = Engine::open(c);
  for (int i = 0; i < 2000; ++i) ASSERT_EQ(e->get(key(i)), value_for(i));
}

TEST(Engine, ReadersSeeOnlyWrittenVersions) {
  TempDir dir;
  auto e = Engine::open(small_config(dir.path()));
  const int n = 300;
  for (int i = 0; i < n; ++i) e->put(key(i), value_for(i, 0));
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::vector<std::jthread> readers;
  for (int r = 0; r < 3; ++r) {
    readers.emplace_back([&, r] {
      std::mt19937_64 rng(r);
      while (!done.load()) {
        const int i = static_cast<int>(rng() % n);
        const auto v = e->get(key(i));
        bool ok = false;
        for (int ver = 0; ver < 8 && v && !ok; ++ver) ok = *v == value_for(i, ver);
        if (!ok) bad.fetch_add(1);
      }
    });
  }
  for (int ver = 1; ver < 8; ++ver) {
    for (int i = 0; i < n; ++i) e->put(key(i), value_for(i, ver));
    e->flush();
    if (ver % 3 == 0) e->compact();
  }
  done = true;
  readers.clear();
  EXPECT_EQ(bad.load(), 0);
}

TEST(Engine, StatsRatio) {
  TempDir dir;
  auto e = Engine::open(small_config(dir.path()));
  for (int i = 0; i < 2000; ++i) e->put(key(i), value_for(i));
  e->flush();
  const auto s = e->stats();
  ASSERT_TRUE(s.ratio.has_value());
  EXPECT_DOUBLE_EQ(*s.ratio, static_cast<double>(s.compressed_bytes) / s.raw_bytes);
  EXPECT_LT(*s.ratio, 0.5);
  EXPECT_EQ(s.entry_count, 2000u);
}

}  // namespace
}  // namespace ppcs
