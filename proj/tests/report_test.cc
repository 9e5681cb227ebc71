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

#include "ppcs/report.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ppcs/error.h"

namespace ppcs {
namespace {

ReportRow row(double ratio, double mib_s, const std::string& phase = "build") {
  ReportRow r;
  r.phase = phase;
  r.codec = CodecSpec::zstd(3);
  r.block_kib = 64;
  r.threads = 1;
  r.ratio = ratio;
  r.measurement.wall_time = 1.0;
  r.measurement.bytes_processed = static_cast<uint64_t>(mib_s * 1024 * 1024);
  r.measurement.run_count = 1;
  return r;
}

const std::vector<Objective> kRatioThroughput = {{"ratio", Direction::kMinimize},
                                                 {"mib_per_s", Direction::kMaximize}};

// Brute-force oracle: index set of rows no other row dominates.
std::vector<size_t> oracle_frontier(const std::vector<ReportRow>& rows, const std::vector<Objective>& obj) {
  std::vector<size_t> out;
  for (size_t i = 0; i < rows.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < rows.size() && !dominated; ++j) {
      if (i == j) continue;
      bool all = true;
      bool strict = false;
      for (const auto& o : obj) {
        const double a = *row_field(rows[j], o.field);
        const double b = *row_field(rows[i], o.field);
        const double better = o.direction == Direction::kMinimize ? b - a : a - b;
        all = all && better >= 0;
        strict = strict || better > 0;
      }
      dominated = all && strict;
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

std::string csv_of(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

TEST(Pareto, ThreeRowExample) {
  const std::vector<ReportRow> rows = {row(.1905, 446.67), row(.1549, 157.75), row(.1985, 190.28)};
  const auto f = pareto_frontier(rows, kRatioThroughput);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(csv_of(f), csv_of({rows[0], rows[1]}));
  EXPECT_TRUE(dominates(rows[0], rows[2], kRatioThroughput));
}

TEST(Pareto, SingleAndIdenticalRows) {
  EXPECT_EQ(pareto_frontier({row(.2, 100)}, kRatioThroughput).size(), 1u);
  EXPECT_EQ(pareto_frontier({row(.2, 100), row(.2, 100)}, kRatioThroughput).size(), 2u);
  EXPECT_TRUE(pareto_frontier({}, kRatioThroughput).empty());
}

TEST(Pareto, MissingFieldNamesTheRow) {
  auto r = row(.2, 100, "get");
  r.ratio.reset();
  try {
    pareto_frontier({row(.1, 50), r}, kRatioThroughput);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kReport);
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(pareto_frontier({row(.1, 50)}, {{"mb_per_j", Direction::kMaximize}}), Error);
}

TEST(Pareto, MatchesBruteForceAndIsIdempotent) {
  std::mt19937_64 rng(8);
  const std::vector<Objective> three = {{"ratio", Direction::kMinimize},
                                        {"mib_per_s", Direction::kMaximize},
                                        {"mb_per_j", Direction::kMaximize}};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ReportRow> rows;
    const size_t n = 1 + rng() % 1000;
    for (size_t i = 0; i < n; ++i) {
      // Coarse grid so ties and duplicates occur.
      auto r = row(0.1 + 0.01 * static_cast<double>(rng() % 20), 10.0 * static_cast<double>(1 + rng() % 30));
      r.measurement.energy = 1.0 + static_cast<double>(rng() % 10);
      rows.push_back(r);
    }
    for (const auto& obj : {kRatioThroughput, three}) {
      const auto f = pareto_frontier(rows, obj);
      const auto idx = oracle_frontier(rows, obj);
      std::vector<ReportRow> expected;
      for (size_t i : idx) expected.push_back(rows[i]);
      ASSERT_EQ(csv_of(f), csv_of(expected));
      EXPECT_EQ(csv_of(pareto_frontier(f, obj)), csv_of(f));
      // Every excluded row is dominated by a retained one.
      for (size_t i = 0, k = 0; i < rows.size(); ++i) {
        if (k < idx.size() && idx[k] == i) {
          ++k;
          continue;
        }
        EXPECT_TRUE(std::any_of(f.begin(), f.end(), [&](const ReportRow& g) { return dominates(g, rows[i], obj); }));
      }
    }
  }
}

TEST(Csv, HeaderAndEmptyEnergyColumns) {
  std::ostringstream out;
  auto r = row(.25, 100);
  r.phase = "multi_get";
  r.distribution = "powerlaw";
  r.batch = 100;
  r.threads = 4;
  write_csv(out, {r});
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "phase,codec,level,block_kib,threads,distribution,batch,runs,bytes,seconds,joules,"
            "mib_per_s,mb_per_j,ratio");
  EXPECT_NE(text.find("multi_get,zstd,3,64,4,powerlaw,100,1,104857600,1.000000,,100.0000,,0.250000"),
            std::string::npos)
      << text;
}

TEST(Csv, RoundTrip) {
  std::vector<ReportRow> rows = {row(.2, 100), row(.3, 50, "get")};
  rows[1].codec = CodecSpec::snappy();
  rows[1].distribution = "uniform";
  rows[1].batch = 1;
  rows[1].measurement.energy = 12.5;
  rows[1].ratio.reset();
  std::istringstream in(csv_of(rows));
  const auto back = read_csv(in);
  EXPECT_EQ(csv_of(back), csv_of(rows));
}

TEST(Csv, RunsFileHasOneLinePerRepeat) {
  auto r = row(.2, 100);
  r.measurement.runs = {{0.5, 10, std::nullopt}, {0.7, 10, 3.0}};
  std::ostringstream out;
  write_runs_csv(out, {r});
  EXPECT_EQ(out.str(),
            "phase,codec,level,block_kib,threads,distribution,batch,run,bytes,seconds,joules\n"
            "build,zstd,3,64,1,,,1,10,0.500000,\n"
            "build,zstd,3,64,1,,,2,10,0.700000,3.000000\n");
}

TEST(Csv, MalformedInput) {
  std::istringstream bad_header("a,b,c\n");
  EXPECT_THROW(read_csv(bad_header), Error);
  std::istringstream short_row(std::string(kReportHeader) + "\nbuild,zstd,3\n");
  EXPECT_THROW(read_csv(short_row), Error);
}

TEST(Objectives, Parse) {
  const auto o = parse_objectives("ratio:min,mib_per_s:max");
  ASSERT_EQ(o.size(), 2u);
  EXPECT_EQ(o[1].field, "mib_per_s");
  EXPECT_EQ(o[1].direction, Direction::kMaximize);
  EXPECT_THROW(parse_objectives("ratio"), Error);
  EXPECT_THROW(parse_objectives("speed:max"), Error);
  EXPECT_THROW(parse_objectives("ratio:up"), Error);
}

}  // namespace
}  // namespace ppcs
