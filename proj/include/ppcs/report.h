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

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ppcs/codec.h"
#include "ppcs/metrics.h"

namespace ppcs {

inline constexpr std::string_view kReportHeader =
    "phase,codec,level,block_kib,threads,distribution,batch,runs,bytes,seconds,joules,"
    "mib_per_s,mb_per_j,ratio";

struct ReportRow {
  std::string phase;  // build | get | multi_get
  CodecSpec codec;
  uint64_t block_kib = 0;
  int threads = 0;
  std::string distribution;  // empty for build rows
  uint64_t batch = 0;        // 0 for build rows
  Measurement measurement;
  std::optional<double> ratio;

  std::string label() const;
};

// Derived columns are recomputed from the measurement; rows parsed back from
// CSV carry the mean values only (no per-run samples).
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows, bool header = true);
std::string row_to_csv(const ReportRow& row);
std::vector<ReportRow> read_csv(std::istream& in);
std::vector<ReportRow> read_csv_file(const std::filesystem::path& path);

// One line per repeat: the config columns, then run,bytes,seconds,joules.
void write_runs_csv(std::ostream& out, const std::vector<ReportRow>& rows);

enum class Direction { kMinimize, kMaximize };

struct Objective {
  std::string field;  // ratio | mib_per_s | mb_per_j | seconds | joules | bytes
  Direction direction = Direction::kMinimize;
};

// "ratio:min,mib_per_s:max"
std::vector<Objective> parse_objectives(std::string_view text);

std::optional<double> row_field(const ReportRow& row, std::string_view field);

// Rows not dominated by any other row, in input order.
std::vector<ReportRow> pareto_frontier(const std::vector<ReportRow>& rows,
                                       const std::vector<Objective>& objectives);

bool dominates(const ReportRow& a, const ReportRow& b, const std::vector<Objective>& objectives);

void print_table(std::ostream& out, const std::vector<ReportRow>& rows);

}  // namespace ppcs
