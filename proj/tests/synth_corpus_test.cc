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

#include "ppcs/synth_corpus.h"

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "ppcs/file.h"
#include "ppcs/ppc_key.h"
#include "test_util.h"

namespace ppcs {
namespace {

std::vector<CorpusRecord> generate(const SynthCorpusOptions& o) {
  std::vector<CorpusRecord> out;
  generate_synthetic_corpus(o, [&](CorpusRecord&& r) { out.push_back(std::move(r)); });
  return out;
}

SynthCorpusOptions small() {
  SynthCorpusOptions o;
  o.num_files = 2000;
  o.target_bytes = 2000 * 4000;
  o.files_per_family = 25;
  return o;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(SynthCorpus, DeterministicAndSized) {
  const auto a = generate(small());
  const auto b = generate(small());
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 2000u);
  uint64_t bytes = 0;
  std::set<std::string> ids;
  for (const auto& r : a) {
    bytes += r.content.size();
    ids.insert(r.content_id);
    EXPECT_FALSE(r.filename_candidates.empty());
  }
  EXPECT_EQ(ids.size(), a.size());
  EXPECT_NEAR(static_cast<double>(bytes), 2000.0 * 4000, 2000.0 * 4000 * 0.25);
  auto other = small();
  other.seed = 2;
  EXPECT_NE(generate(other), a);
}

TEST(SynthCorpus, FamiliesShareMostLines) {
  const auto recs = generate(small());
  std::map<std::string, std::vector<const CorpusRecord*>> families;
  for (const auto& r : recs) families[canonical_filename(r.filename_candidates)].push_back(&r);
  EXPECT_EQ(families.size(), 80u);
  // Positionally aligned lines agree when both files kept the template
  // line: expected share overlap^2 = 0.49 for overlap 0.7.
  double agree = 0;
  double total = 0;
  for (const auto& [name, members] : families) {
    for (size_t i = 1; i < members.size(); ++i) {
      const auto a = lines_of(members[0]->content);
      const auto b = lines_of(members[i]->content);
      if (a.empty() || b.empty()) continue;
      for (size_t l = 0; l < std::min(a.size(), b.size()); ++l) agree += a[l] == b[l] ? 1 : 0;
      total += static_cast<double>(std::min(a.size(), b.size()));
    }
  }
  EXPECT_NEAR(agree / total, 0.49, 0.05);
}

TEST(SynthCorpus, NamesDeriveValidKeys) {
  for (const auto& r : generate(small())) {
    const auto k = derive_key(canonical_filename(r.filename_candidates), r.content_id);
    EXPECT_FALSE(k.basename.empty());
  }
}

TEST(SynthCorpus, WritesParsableJsonl) {
  testing::TempDir dir;
  auto o = small();
  o.num_files = 100;
  const auto stats = write_synthetic_corpus(dir / "c.jsonl", o);
  EXPECT_EQ(stats.files, 100u);
  std::istringstream in(read_file(dir / "c.jsonl"));
  EXPECT_EQ(parse_record_stream(in), generate(o));
}

}  // namespace
}  // namespace ppcs
