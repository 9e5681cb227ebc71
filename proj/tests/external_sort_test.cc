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

#include "ppcs/external_sort.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_util.h"

namespace ppcs {
namespace {

using Pairs = std::vector<std::pair<std::string, std::string>>;

Pairs run_sort(const Pairs& input, uint64_t budget, uint64_t* runs, const std::filesystem::path& dir) {
  ExternalSorter s(dir, budget);
  for (const auto& [k, v] : input) s.add(k, v);
  *runs = s.runs_spilled();
  Pairs out;
  s.finish([&](std::string_view k, std::string_view v) { out.emplace_back(k, v); });
  return out;
}

TEST(ExternalSorter, MatchesStableSortAcrossManyRuns) {
  testing::TempDir dir;
  std::mt19937_64 rng(1);
  Pairs input;
  for (int i = 0; i < 20000; ++i) {
    std::string k = "k" + std::to_string(rng() % 5000);  // duplicates on purpose
    k += std::string(1, '\0') + "x";
    input.emplace_back(k, testing::random_bytes(rng, rng() % 200));
  }
  Pairs expected = input;
  std::stable_sort(expected.begin(), expected.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  uint64_t runs = 0;
  EXPECT_EQ(run_sort(input, 64 * 1024, &runs, dir / "s"), expected);
  EXPECT_GT(runs, 10u);
  // Run files are gone afterwards.
  EXPECT_TRUE(std::filesystem::is_empty(dir / "s"));
}

TEST(ExternalSorter, InMemoryPathAndEmptyInput) {
  testing::TempDir dir;
  uint64_t runs = 0;
  EXPECT_EQ(run_sort({{"b", "2"}, {"a", "1"}}, 1 << 20, &runs, dir / "s"),
            (Pairs{{"a", "1"}, {"b", "2"}}));
  EXPECT_EQ(runs, 0u);
  EXPECT_TRUE(run_sort({}, 1 << 20, &runs, dir / "t").empty());
}

TEST(ExternalSorter, SingleUse) {
  testing::TempDir dir;
  ExternalSorter s(dir / "s", 1024);
  s.finish([](std::string_view, std::string_view) {});
  EXPECT_THROW(s.finish([](std::string_view, std::string_view) {}), std::exception);
  EXPECT_THROW(s.add("a", "b"), std::exception);
}

}  // namespace
}  // namespace ppcs
