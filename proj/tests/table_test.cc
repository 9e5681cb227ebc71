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

#include "ppcs/table.h"

#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "ppcs/error.h"
#include "ppcs/file.h"
#include "ppcs/ppc_key.h"
#include "ppcs/synth_corpus.h"
#include "test_util.h"

namespace ppcs {
namespace {

using testing::TempDir;

std::string key_of(int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "key-%08d", i);
  return buf;
}

std::vector<Entry> numbered(int n, size_t value_size, uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::vector<Entry> out;
  for (int i = 0; i < n; ++i) out.push_back({key_of(i), testing::random_bytes(rng, value_size)});
  return out;
}

TableOptions opts(size_t block, CodecSpec codec = CodecSpec::zstd(3)) {
  return TableOptions{block, codec, 10.0};
}

// Oracle for the packing rule: close a block once its raw size reaches the
// target; an entry's raw size is 8 header bytes plus key and value.
std::vector<int> packing_oracle(const std::vector<Entry>& entries, size_t target) {
  std::vector<int> blocks;
  size_t raw = 0;
  int count = 0;
  for (const auto& e : entries) {
    raw += 8 + e.key.size() + (e.value ? e.value->size() : 0);
    ++count;
    if (raw >= target) {
      blocks.push_back(count);
      raw = 0;
      count = 0;
    }
  }
  if (count) blocks.push_back(count);
  return blocks;
}

std::vector<int> actual_packing(const Table& t) {
  std::vector<int> out;
  for (size_t i = 0; i < t.index().size(); ++i) out.push_back(static_cast<int>(t.read_block(i)->size()));
  return out;
}

TEST(BuildTable, PacksTenOneKiBEntriesAsFourFourTwo) {
  TempDir dir;
  const auto entries = numbered(10, 1024);
  build_table(dir / "t.ppcs", entries, opts(4096));
  const auto t = Table::open(dir / "t.ppcs");
  EXPECT_EQ(packing_oracle(entries, 4096), (std::vector<int>{4, 4, 2}));
  EXPECT_EQ(actual_packing(*t), (std::vector<int>{4, 4, 2}));
}

TEST(BuildTable, PackingMatchesOracleOnMixedSizes) {
  TempDir dir;
  std::mt19937_64 rng(11);
  std::vector<Entry> entries;
  for (int i = 0; i < 400; ++i) {
    entries.push_back({key_of(i), testing::random_bytes(rng, rng() % 3000)});
  }
  build_table(dir / "t.ppcs", entries, opts(4096, CodecSpec::snappy()));
  EXPECT_EQ(actual_packing(*Table::open(dir / "t.ppcs")), packing_oracle(entries, 4096));
}

TEST(BuildTable, OversizedEntryIsOneWholeBlock) {
  TempDir dir;
  const auto entries = numbered(1, 1 << 20);
  build_table(dir / "t.ppcs", entries, opts(4096));
  const auto t = Table::open(dir / "t.ppcs");
  ASSERT_EQ(t->index().size(), 1u);
  EXPECT_EQ(t->get(entries[0].key).value, *entries[0].value);
}

TEST(BuildTable, EmptyTable) {
  TempDir dir;
  build_table(dir / "t.ppcs", {}, opts(4096));
  const auto t = Table::open(dir / "t.ppcs");
  EXPECT_TRUE(t->empty());
  EXPECT_EQ(t->footer().entry_count, 0u);
  EXPECT_EQ(t->get("anything").kind, LookupKind::kAbsent);
  EXPECT_TRUE(t->scan_all().empty());
}

TEST(BuildTable, SortViolations) {
  TempDir dir;
  for (const auto& keys : {std::vector<std::string>{"b", "a"}, std::vector<std::string>{"a", "a"}}) {
    TableBuilder b(dir / "t.ppcs", opts(4096));
    b.add(keys[0], std::string_view("v"));
    try {
      b.add(keys[1], std::string_view("v"));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kSortViolation);
    }
    b.abandon();
  }
}

TEST(BuildTable, BitExactRebuild) {
  TempDir dir;
  const auto entries = numbered(2000, 300);
  build_table(dir / "a.ppcs", entries, opts(16384));
  build_table(dir / "b.ppcs", entries, opts(16384));
  EXPECT_EQ(read_file(dir / "a.ppcs"), read_file(dir / "b.ppcs"));
}

TEST(BuildTable, FooterLayout) {
  TempDir dir;
  build_table(dir / "t.ppcs", numbered(100, 50), opts(4096, CodecSpec::zstd(6)));
  const std::string bytes = read_file(dir / "t.ppcs");
  ASSERT_GE(bytes.size(), kFooterSize);
  EXPECT_EQ(bytes.substr(bytes.size() - 4), "PPCS");
  const auto f = TableFooter::decode(std::string_view(bytes).substr(bytes.size() - kFooterSize));
  EXPECT_EQ(f.entry_count, 100u);
  EXPECT_EQ(f.codec, CodecSpec::zstd(6));
  EXPECT_EQ(f.target_block_size, 4096u);
  // First data block header: algorithm tag and level.
  EXPECT_EQ(static_cast<uint8_t>(bytes[0]), static_cast<uint8_t>(Algorithm::kZstd));
  EXPECT_EQ(static_cast<uint8_t>(bytes[1]), 6);
}

TEST(TableGet, EveryKeyAndOneBlockPerGet) {
  TempDir dir;
  const auto entries = numbered(3000, 200);
  build_table(dir / "t.ppcs", entries, opts(4096));
  for (bool mmap : {false, true}) {
    const auto t = Table::open(dir / "t.ppcs", mmap);
    for (const auto& e : entries) {
      const uint64_t before = t->counters().blocks_read.load();
      const auto r = t->get(e.key);
      ASSERT_EQ(r.kind, LookupKind::kFound);
      ASSERT_EQ(r.value, *e.value);
      ASSERT_EQ(t->counters().blocks_read.load() - before, 1u);
    }
  }
}

TEST(TableGet, MissesMostlyReadNoBlocks) {
  TempDir dir;
  build_table(dir / "t.ppcs", numbered(10000, 20), opts(4096));
  const auto t = Table::open(dir / "t.ppcs");
  int zero_block = 0;
  const int misses = 10000;
  for (int i = 0; i < misses; ++i) {
    // Interleaved absent keys, all inside the table's key range.
    const std::string k = key_of(i) + "x";
    const uint64_t before = t->counters().blocks_read.load();
    EXPECT_EQ(t->get(k).kind, LookupKind::kAbsent);
    zero_block += t->counters().blocks_read.load() == before ? 1 : 0;
  }
  EXPECT_GE(zero_block, misses * 98 / 100);
}

TEST(TableGet, TombstonesAreReported) {
  TempDir dir;
  build_table(dir / "t.ppcs", {{"a", "1"}, {"b", std::nullopt}, {"c", "3"}}, opts(1024));
  const auto t = Table::open(dir / "t.ppcs");
  EXPECT_EQ(t->get("b").kind, LookupKind::kDeleted);
  EXPECT_EQ(t->get("c").value, "3");
  EXPECT_EQ(t->scan_all().size(), 3u);
}

TEST(TableScan, RangesAcrossBlocks) {
  TempDir dir;
  const auto entries = numbered(40, 500);
  build_table(dir / "t.ppcs", entries, opts(4096));
  const auto t = Table::open(dir / "t.ppcs");
  ASSERT_GE(t->index().size(), 2u);
  EXPECT_EQ(t->scan_all(), entries);
  EXPECT_TRUE(t->scan(key_of(5), key_of(5)).empty());
  // Straddle the first block boundary.
  const std::string boundary = t->index()[1].first_key;
  const int b = std::stoi(boundary.substr(4));
  const auto got = t->scan(key_of(b - 2), key_of(b + 2));
  EXPECT_EQ(got, std::vector<Entry>(entries.begin() + b - 2, entries.begin() + b + 2));
}

TEST(TableErrors, CorruptBlockAndTruncatedFile) {
  TempDir dir;
  build_table(dir / "t.ppcs", numbered(200, 100), opts(4096));
  std::string bytes = read_file(dir / "t.ppcs");
  {
    std::string bad = bytes;
    bad[20] ^= 0x40;
    std::ofstream(dir / "bad.ppcs", std::ios::binary) << bad;
    const auto t = Table::open(dir / "bad.ppcs");
    try {
      t->read_block(0);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kIntegrity);
    }
  }
  {
    std::ofstream(dir / "short.ppcs", std::ios::binary) << bytes.substr(0, bytes.size() - 10);
    try {
      Table::open(dir / "short.ppcs");
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kFormat);
    }
  }
}

// Entries of a small redundant corpus in PPC key order.
std::vector<Entry> ppc_sorted_corpus(uint64_t files) {
  SynthCorpusOptions o;
  o.num_files = files;
  o.target_bytes = files * 6000;
  o.files_per_family = 20;
  std::vector<Entry> entries;
  generate_synthetic_corpus(o, [&](CorpusRecord&& r) {
    entries.push_back({encode(derive_key(canonical_filename(r.filename_candidates), r.content_id)),
                       std::move(r.content)});
  });
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.key < b.key; });
  return entries;
}

TEST(TableTradeOff, LargerBlocksCompressBetterAndReadMore) {
  TempDir dir;
  const auto entries = ppc_sorted_corpus(1500);
  double prev_ratio = 2.0;
  double prev_bytes = 0.0;
  for (size_t kib : {4, 16, 64, 128}) {
    const auto path = dir / ("t" + std::to_string(kib) + ".ppcs");
    const auto f = build_table(path, entries, opts(kib * 1024, CodecSpec::zstd(6)));
    const double ratio = static_cast<double>(f.compressed_bytes_total) / f.raw_bytes_total;
    EXPECT_LE(ratio, prev_ratio) << kib;
    const auto t = Table::open(path);
    for (size_t i = 0; i < entries.size(); i += 7) t->get(entries[i].key);
    const double per_get = static_cast<double>(t->counters().bytes_decompressed.load()) /
                           static_cast<double>(t->counters().gets.load());
    EXPECT_GT(per_get, prev_bytes) << kib;
    prev_ratio = ratio;
    prev_bytes = per_get;
  }
}

}  // namespace
}  // namespace ppcs
