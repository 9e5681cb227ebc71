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

#include "ppcs/corpus.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "ppcs/error.h"
#include "test_util.h"

namespace ppcs {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kPrecondition;
}

TEST(Base64, Rfc4648Vectors) {
  const std::pair<const char*, const char*> vectors[] = {
      {"", ""},         {"f", "Zg=="},         {"fo", "Zm8="},        {"foo", "Zm9v"},
      {"foob", "Zm9vYg=="}, {"fooba", "Zm9vYmE="}, {"foobar", "Zm9vYmFy"}};
  for (const auto& [raw, text] : vectors) {
    EXPECT_EQ(base64_encode(raw), text);
    EXPECT_EQ(base64_decode(text), raw);
  }
}

TEST(Base64, RejectsMalformed) {
  for (const char* bad : {"Zg=", "Z===", "Zm9v!", "Zg==Zg==", "Zm9"}) {
    EXPECT_EQ(code_of([&] { base64_decode(bad); }), ErrorCode::kDecode) << bad;
  }
}

TEST(ParseRecordStream, SpecExampleLine) {
  const auto recs = parse_record_stream(
      std::string_view(R"({"id":"swh:1:cnt:aa","names":[["main.py",3]],"content":"cHJpbnQoKQ=="})"));
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].content_id, "swh:1:cnt:aa");
  EXPECT_EQ(recs[0].content, "print()");
  ASSERT_EQ(recs[0].filename_candidates.size(), 1u);
  EXPECT_EQ(recs[0].filename_candidates[0], (FilenameCandidate{"main.py", 3}));
  EXPECT_FALSE(recs[0].language.has_value());
}

TEST(ParseRecordStream, EmptyStreamAndComments) {
  EXPECT_TRUE(parse_record_stream(std::string_view("")).empty());
  const auto recs = parse_record_stream(std::string_view(
      "# header\n\n{\"id\":\"a\",\"names\":[[\"x\",0]],\"content\":\"\",\"lang\":\"C\"}\n"));
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].content, "");
  EXPECT_EQ(recs[0].language, "C");
}

TEST(ParseRecordStream, MalformedLineReportsItsNumberAndStops) {
  const std::string text =
      "{\"id\":\"a\",\"names\":[[\"a.c\",1]],\"content\":\"YQ==\"}\n"
      "{\"id\":\"b\",\"names\":[[\"b.c\",1]],\"content\":\n"
      "{\"id\":\"c\",\"names\":[[\"c.c\",1]],\"content\":\"Yw==\"}\n"
      "{\"id\":\"d\",\"names\":[[\"d.c\",1]],\"content\":\"ZA==\"}\n";
  std::istringstream in(text);
  CorpusReader reader(in);
  ASSERT_TRUE(reader.next().has_value());
  try {
    reader.next();
    FAIL() << "malformed line accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_EQ(reader.line_number(), 2u);
  // Nothing past line 2 was consumed.
  std::string rest;
  std::getline(in, rest);
  EXPECT_EQ(rest.rfind("{\"id\":\"c\"", 0), 0u);
}

TEST(ParseRecordStream, SchemaAndDecodeErrors) {
  EXPECT_EQ(code_of([] { parse_record_stream(std::string_view(R"({"names":[["a",1]],"content":""})")); }),
            ErrorCode::kSchema);
  EXPECT_EQ(code_of([] { parse_record_stream(std::string_view(R"({"id":"a","content":""})")); }),
            ErrorCode::kSchema);
  EXPECT_EQ(code_of([] { parse_record_stream(std::string_view(R"({"id":"a","names":[],"content":""})")); }),
            ErrorCode::kSchema);
  EXPECT_EQ(code_of([] { parse_record_stream(std::string_view(R"({"id":"","names":[["a",1]],"content":""})")); }),
            ErrorCode::kSchema);
  EXPECT_EQ(code_of([] { parse_record_stream(std::string_view(R"({"id":"a","names":[["a",-1]],"content":""})")); }),
            ErrorCode::kSchema);
  EXPECT_EQ(code_of([] { parse_record_stream(std::string_view(R"({"id":"a","names":[["a",1]],"content":"@@"})")); }),
            ErrorCode::kDecode);
  EXPECT_EQ(code_of([] {
              parse_record_stream(std::string_view(
                  "{\"id\":\"a\",\"names\":[[\"a\",1]],\"content\":\"\"}\n"
                  "{\"id\":\"a\",\"names\":[[\"b\",1]],\"content\":\"\"}\n"));
            }),
            ErrorCode::kSchema);
}

TEST(CanonicalFilename, MaxCountThenSmallestName) {
  EXPECT_EQ(canonical_filename({{"util.c", 5}, {"utils.c", 2}}), "util.c");
  EXPECT_EQ(canonical_filename({{"b.h", 3}, {"a.h", 3}}), "a.h");
  EXPECT_EQ(canonical_filename({{"x", 0}}), "x");
  EXPECT_EQ(code_of([] { canonical_filename({}); }), ErrorCode::kPrecondition);
}

TEST(CanonicalFilename, PermutationInvariant) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<FilenameCandidate> c;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      c.push_back({std::string(1, static_cast<char>('a' + rng() % 5)) + ".c", rng() % 4});
    }
    const std::string expected = canonical_filename(c);
    for (int p = 0; p < 5; ++p) {
      std::shuffle(c.begin(), c.end(), rng);
      EXPECT_EQ(canonical_filename(c), expected);
    }
  }
}

TEST(SerializeRecord, RoundTripsArbitraryBytes) {
  std::mt19937_64 rng(4);
  std::string text;
  std::vector<CorpusRecord> records;
  for (int i = 0; i < 200; ++i) {
    CorpusRecord r;
    r.content_id = "swh:1:cnt:" + std::to_string(i);
    r.filename_candidates = {{"f" + std::to_string(i) + ".\xc3\xa9", rng() % 100}, {"g", 0}};
    r.content = testing::random_bytes(rng, i == 0 ? 0 : rng() % 3000);
    if (i % 3 == 0) r.language = "Python";
    text += serialize_record(r) + "\n";
    records.push_back(std::move(r));
  }
  EXPECT_EQ(parse_record_stream(std::string_view(text)), records);
}

}  // namespace
}  // namespace ppcs
