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

#include "ppcs/ppc_key.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <tuple>

#include "ppcs/error.h"

namespace ppcs {
namespace {

using namespace std::string_literals;

TEST(DeriveKey, ExtensionAfterLastDot) {
  EXPECT_EQ(derive_key("doxygen.h", "id"), (PpcKey{"h", "doxygen", "id"}));
  EXPECT_EQ(display(derive_key("doxygen.h", "id")).rfind("h.doxygen", 0), 0u);
  EXPECT_EQ(derive_key("README", "id"), (PpcKey{"", "README", "id"}));
  EXPECT_EQ(derive_key("archive.tar.gz", "id"), (PpcKey{"gz", "archive.tar", "id"}));
}

TEST(DeriveKey, TrailingDotAndCase) {
  EXPECT_EQ(derive_key("notes.", "id"), (PpcKey{"", "notes.", "id"}));
  EXPECT_EQ(derive_key("Main.C", "id"), (PpcKey{"c", "Main", "id"}));
}

TEST(DeriveKey, DotfileKeepsWholeName) {
  EXPECT_EQ(derive_key(".bashrc", "id"), (PpcKey{"", ".bashrc", "id"}));
}

TEST(DeriveKey, RejectsNulAndEmpty) {
  for (const auto& [name, id] : {std::pair{"a\0b.c"s, "id"s}, {"a.c"s, "i\0d"s}, {""s, "id"s},
                                 {"a.c"s, ""s}}) {
    try {
      derive_key(name, id);
      FAIL() << "accepted invalid input";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidName);
    }
  }
}

TEST(Encode, SeparatorLayout) {
  EXPECT_EQ(encode({"py", "main", "X1"}), "py\0main\0X1"s);
  EXPECT_LT(encode(derive_key("z.c", "1")), encode(derive_key("a.py", "1")));
}

TEST(Decode, InverseAndErrors) {
  EXPECT_EQ(decode("py\0main\0X1"s), (PpcKey{"py", "main", "X1"}));
  for (const auto& bad : {"nomarkers"s, "\0\0X"s, "a\0b"s, "a\0b\0c\0d"s, "a\0b\0"s}) {
    try {
      decode(bad);
      FAIL() << "decoded malformed key";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformedKey);
    }
  }
}

std::string random_field(std::mt19937_64& rng, size_t min_len) {
  const size_t n = min_len + rng() % 8;
  std::string s;
  for (size_t i = 0; i < n; ++i) s += static_cast<char>(1 + rng() % 255);
  return s;
}

TEST(Encode, RoundTripAgainstSplitOracle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    PpcKey k{random_field(rng, 0), random_field(rng, 1), random_field(rng, 1)};
    const std::string e = encode(k);
    // Oracle: split on the two NUL bytes.
    const size_t a = e.find('\0');
    const size_t b = e.find('\0', a + 1);
    ASSERT_NE(b, std::string::npos);
    EXPECT_EQ(e.substr(0, a), k.extension);
    EXPECT_EQ(e.substr(a + 1, b - a - 1), k.basename);
    EXPECT_EQ(e.substr(b + 1), k.content_id);
    EXPECT_EQ(decode(e), k);
  }
}

TEST(Encode, StrictlyMonotoneInTupleOrder) {
  std::mt19937_64 rng(2);
  auto field = [&](size_t min_len) {
    std::string s;
    const size_t n = min_len + rng() % 3;
    for (size_t i = 0; i < n; ++i) s += static_cast<char>('a' + rng() % 3);
    return s;
  };
  for (int i = 0; i < 5000; ++i) {
    PpcKey x{field(0), field(1), field(1)};
    PpcKey y{field(0), field(1), field(1)};
    const auto tx = std::tie(x.extension, x.basename, x.content_id);
    const auto ty = std::tie(y.extension, y.basename, y.content_id);
    EXPECT_EQ(tx < ty, encode(x) < encode(y));
    EXPECT_EQ(tx == ty, encode(x) == encode(y));
  }
}

TEST(Encode, SortingGroupsExtensionThenBasename) {
  std::mt19937_64 rng(3);
  const char* names[] = {"a.py", "b.py", "a.c", "main.c", "README", "x.tar.gz", "lib.h"};
  std::vector<std::pair<std::string, std::string>> keyed;  // encoded, name
  for (int i = 0; i < 500; ++i) {
    const std::string name = names[rng() % std::size(names)];
    keyed.emplace_back(encode(derive_key(name, "id" + std::to_string(i))), name);
  }
  std::sort(keyed.begin(), keyed.end());
  // Each extension and each full name forms exactly one contiguous run.
  std::vector<std::string> exts;
  std::vector<std::string> runs;
  for (const auto& [e, name] : keyed) {
    const auto k = decode(e);
    if (exts.empty() || exts.back() != k.extension) exts.push_back(k.extension);
    if (runs.empty() || runs.back() != name) runs.push_back(name);
  }
  auto unique_count = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return std::unique(v.begin(), v.end()) - v.begin();
  };
  EXPECT_EQ(static_cast<long>(exts.size()), unique_count(exts));
  EXPECT_EQ(static_cast<long>(runs.size()), unique_count(runs));
  EXPECT_EQ(decode(keyed.front().first).extension, "");  // no-extension run sorts first
}

TEST(Hex, RoundTrip) {
  EXPECT_EQ(to_hex("py\0m"s), "7079006d");
  EXPECT_EQ(from_hex("7079006d"), "py\0m"s);
  EXPECT_THROW(from_hex("abc"), Error);
  EXPECT_THROW(from_hex("zz"), Error);
}

}  // namespace
}  // namespace ppcs
