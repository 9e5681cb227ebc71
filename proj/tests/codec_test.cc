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

#include "ppcs/codec.h"

#include <gtest/gtest.h>

#include <random>

#include "ppcs/error.h"
#include "ppcs/synth_corpus.h"
#include "test_util.h"

namespace ppcs {
namespace {

const CodecSpec kAll[] = {CodecSpec::identity(), CodecSpec::snappy(), CodecSpec::zstd(1),
                          CodecSpec::zstd(3), CodecSpec::zstd(9), CodecSpec::zstd(22),
                          CodecSpec::deflate(1), CodecSpec::deflate(6), CodecSpec::deflate(9)};

TEST(CodecSpec, ParseAndPrint) {
  EXPECT_EQ(CodecSpec::parse("identity"), CodecSpec::identity());
  EXPECT_EQ(CodecSpec::parse("snappy"), CodecSpec::snappy());
  EXPECT_EQ(CodecSpec::parse("zstd:6"), CodecSpec::zstd(6));
  EXPECT_EQ(CodecSpec::parse("deflate:9"), CodecSpec::deflate(9));
  EXPECT_EQ(CodecSpec::parse("zlib:5"), CodecSpec::deflate(5));
  for (const auto& s : kAll) EXPECT_EQ(CodecSpec::parse(s.to_string()), s);
}

TEST(CodecSpec, RejectsBadLevels) {
  for (const char* bad : {"zstd:0", "zstd:23", "deflate:0", "deflate:10", "snappy:1", "lz4", "zstd",
                          "zstd:x", "identity:2"}) {
    try {
      CodecSpec::parse(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfig) << bad;
    }
  }
  EXPECT_THROW(CodecSpec::zstd(0), Error);
  EXPECT_THROW(CodecSpec::deflate(10), Error);
}

TEST(Compress, IdentityIsVerbatim) {
  EXPECT_EQ(compress("abc", CodecSpec::identity()), "abc");
  EXPECT_EQ(decompress("", CodecSpec::identity(), 0), "");
}

TEST(Compress, RunOfOneByteUnderZstd3) {
  const std::string raw(1 << 20, 'a');
  const std::string c = compress(raw, CodecSpec::zstd(3));
  EXPECT_LT(c.size(), 5u * 1024);
  // Frozen from this build: frame header, one RLE-heavy block, checksum.
  EXPECT_LE(c.size(), 128u);
  EXPECT_EQ(decompress(c, CodecSpec::zstd(3), raw.size()), raw);
}

TEST(Compress, RoundTripRandomPayloads) {
  std::mt19937_64 rng(5);
  const size_t block = 64 * 1024;
  const size_t sizes[] = {0, 1, block - 1, block, 4 * block, 4 << 20};
  for (const auto& spec : kAll) {
    for (size_t n : sizes) {
      // Half random, half repetitive, so both entropy paths are exercised.
      std::string raw = testing::random_bytes(rng, n / 2);
      while (raw.size() < n) raw += "line of text " + std::to_string(raw.size() % 97) + "\n";
      raw.resize(n);
      const std::string c = compress(raw, spec);
      EXPECT_EQ(decompress(c, spec, raw.size()), raw) << spec.to_string() << " n=" << n;
    }
  }
}

TEST(Decompress, CorruptZstdFrameIsIntegrityError) {
  std::string raw;
  for (int i = 0; i < 2000; ++i) raw += "value " + std::to_string(i * 7919 % 1000) + "\n";
  const std::string c = compress(raw, CodecSpec::zstd(3));
  int detected = 0;
  for (size_t pos = 0; pos < c.size(); pos += std::max<size_t>(1, c.size() / 40)) {
    std::string bad = c;
    bad[pos] = static_cast<char>(bad[pos] ^ 0x5a);
    try {
      const std::string out = decompress(bad, CodecSpec::zstd(3), raw.size());
      ADD_FAILURE() << "corruption at " << pos << " not detected";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kIntegrity);
      ++detected;
    }
  }
  EXPECT_GT(detected, 0);
}

TEST(Decompress, CorruptInputNeverCrashes) {
  std::mt19937_64 rng(6);
  const std::string raw(10000, 'q');
  for (const auto& spec : kAll) {
    const std::string c = compress(raw, spec);
    for (int t = 0; t < 50; ++t) {
      std::string bad = c;
      if (!bad.empty()) bad[rng() % bad.size()] ^= static_cast<char>(1 + rng() % 255);
      try {
        (void)decompress(bad, spec, raw.size());
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kIntegrity);
      }
    }
    // A wrong declared size is always caught.
    if (spec.algorithm() != Algorithm::kIdentity) {
      EXPECT_THROW(decompress(c, spec, raw.size() + 1), Error) << spec.to_string();
    }
  }
}

TEST(CompressionRatio, Arithmetic) {
  EXPECT_DOUBLE_EQ(compression_ratio(19, 100), 0.19);
  EXPECT_DOUBLE_EQ(compression_ratio(100, 100), 1.0);
  try {
    compression_ratio(5, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefinedRatio);
  }
}

TEST(CompressionRatio, IdentityIsExactlyOne) {
  const std::string raw(12345, 'z');
  EXPECT_DOUBLE_EQ(compression_ratio(compress(raw, CodecSpec::identity()).size(), raw.size()), 1.0);
}

TEST(CompressionRatio, LevelOrderingOnSourceText) {
  SynthCorpusOptions o;
  o.num_files = 400;
  o.target_bytes = 400 * 4000;
  std::string raw;
  generate_synthetic_corpus(o, [&](CorpusRecord&& r) { raw += r.content; });
  auto ratio = [&](const CodecSpec& s) {
    return compression_ratio(compress(raw, s).size(), raw.size());
  };
  EXPECT_LE(ratio(CodecSpec::zstd(9)), ratio(CodecSpec::zstd(3)));
  EXPECT_LE(ratio(CodecSpec::zstd(3)), ratio(CodecSpec::snappy()));
}

}  // namespace
}  // namespace ppcs
