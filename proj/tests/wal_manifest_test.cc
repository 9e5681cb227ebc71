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

#include <gtest/gtest.h>

#include <fstream>

#include "ppcs/error.h"
#include "ppcs/file.h"
#include "ppcs/manifest.h"
#include "ppcs/wal.h"
#include "test_util.h"

namespace ppcs {
namespace {

using testing::TempDir;

struct Rec {
  WalOp op;
  std::string key;
  std::optional<std::string> value;
  bool operator==(const Rec&) const = default;
};

std::vector<Rec> replay_all(const std::filesystem::path& p, WalReplayResult* result = nullptr) {
  std::vector<Rec> out;
  auto r = replay_wal(p, [&](WalOp op, std::string_view k, std::optional<std::string_view> v) {
    out.push_back({op, std::string(k), v ? std::optional<std::string>(std::string(*v)) : std::nullopt});
  });
  if (result) *result = r;
  return out;
}

TEST(Wal, AppendAndReplay) {
  TempDir dir;
  const auto p = dir / "wal-000001.log";
  {
    WalWriter w(p, false);
    w.append(WalOp::kPut, "a", "1");
    w.append(WalOp::kDelete, "b", {});
    w.append(WalOp::kPut, "c", std::string(100000, 'x'));
    w.close();
  }
  WalReplayResult r;
  const auto recs = replay_all(p, &r);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0], (Rec{WalOp::kPut, "a", "1"}));
  EXPECT_EQ(recs[1], (Rec{WalOp::kDelete, "b", std::nullopt}));
  EXPECT_EQ(recs[2].value->size(), 100000u);
  EXPECT_FALSE(r.truncated);
  EXPECT_EQ(r.valid_bytes, std::filesystem::file_size(p));
}

TEST(Wal, TornTailIsTruncated) {
  TempDir dir;
  const auto p = dir / "w.log";
  {
    WalWriter w(p, false);
    w.append(WalOp::kPut, "a", "1");
    w.append(WalOp::kPut, "b", "2");
    w.close();
  }
  const auto full = std::filesystem::file_size(p);
  std::filesystem::resize_file(p, full - 3);
  WalReplayResult r;
  const auto recs = replay_all(p, &r);
  EXPECT_EQ(recs.size(), 1u);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(std::filesystem::file_size(p), r.valid_bytes);
  // Replaying again is clean.
  replay_all(p, &r);
  EXPECT_FALSE(r.truncated);
}

TEST(Wal, CorruptRecordStopsReplay) {
  TempDir dir;
  const auto p = dir / "w.log";
  {
    WalWriter w(p, false);
    for (int i = 0; i < 3; ++i) w.append(WalOp::kPut, "k" + std::to_string(i), "value");
    w.close();
  }
  std::string bytes = read_file(p);
  const size_t rec = bytes.size() / 3;
  bytes[rec + rec / 2] ^= 1;  // inside the second record
  std::ofstream(p, std::ios::binary | std::ios::trunc) << bytes;
  WalReplayResult r;
  EXPECT_EQ(replay_all(p, &r).size(), 1u);
  EXPECT_TRUE(r.truncated);
}

TEST(Manifest, RoundTrip) {
  Manifest m;
  m.next_sequence = 42;
  m.log_number = 40;
  m.tables = {{0, 39, 2}, {0, 37, 0}, {1, 12, 0}, {1, 30, 0}};
  const std::string text = m.serialize();
  EXPECT_EQ(text.rfind("ppcs-manifest 1\n", 0), 0u);
  EXPECT_EQ(Manifest::parse(text), m);
}

TEST(Manifest, MalformedIsRecoveryError) {
  for (const char* bad : {"", "garbage\n", "ppcs-manifest 2\nsequence 1\nlog 0\n",
                          "ppcs-manifest 1\nsequence x\nlog 0\n",
                          "ppcs-manifest 1\nsequence 3\nlog 0\ntable 7 1 0\n",
                          "ppcs-manifest 1\nsequence 3\nlog 0\ntable 0 1\n"}) {
    try {
      Manifest::parse(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kRecovery) << bad;
    }
  }
}

TEST(Manifest, FileNames) {
  EXPECT_EQ(table_file_name(7), "tbl-000007.ppcs");
  EXPECT_EQ(wal_file_name(1234567), "wal-1234567.log");
}

}  // namespace
}  // namespace ppcs
