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

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ppcs/error.h"

namespace ppcs {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string opt(const std::optional<double>& v, const char* f) {
  return v ? fmt(f, *v) : std::string();
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_int(const std::string& s, const char* column, uint64_t line) {
  T v{};
  if (s.empty()) return v;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(ErrorCode::kReport,
                "line " + std::to_string(line) + ": bad integer in column " + column);
  }
  return v;
}

std::optional<double> parse_real(const std::string& s, const char* column, uint64_t line) {
  if (s.empty()) return std::nullopt;
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kReport, "line " + std::to_string(line) + ": bad number in column " + column);
}

constexpr std::array<std::string_view, 6> kFields = {"ratio", "mib_per_s", "mb_per_j",
                                                    "seconds", "joules", "bytes"};

std::string config_columns(const ReportRow& r) {
  std::string out = r.phase;
  out += ',';
  out += r.codec.algorithm_name();
  out += ',' + std::to_string(r.codec.level());
  out += ',' + std::to_string(r.block_kib);
  out += ',' + std::to_string(r.threads);
  out += ',' + r.distribution;
  out += ',' + (r.batch ? std::to_string(r.batch) : std::string());
  return out;
}

}  // namespace

std::string ReportRow::label() const {
  std::string out = phase + " " + codec.to_string() + "/" + std::to_string(block_kib) + "KiB p=" +
                    std::to_string(threads);
  if (!distribution.empty()) out += " " + distribution + " b=" + std::to_string(batch);
  return out;
}

std::string row_to_csv(const ReportRow& r) {
  const Measurement& m = r.measurement;
  std::string out = config_columns(r);
  out += ',' + std::to_string(m.run_count);
  out += ',' + std::to_string(m.bytes_processed);
  out += ',' + fmt("%.6f", m.wall_time);
  out += ',' + opt(m.energy, "%.6f");
  out += ',' + (m.wall_time > 0 ? fmt("%.4f", throughput_mib_s(m)) : std::string());
  out += ',' + opt(efficiency_mb_j(m), "%.6f");
  out += ',' + opt(r.ratio, "%.6f");
  return out;
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows, bool header) {
  if (header) out << kReportHeader << '\n';
  for (const auto& r : rows) out << row_to_csv(r) << '\n';
}

void write_runs_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "phase,codec,level,block_kib,threads,distribution,batch,run,bytes,seconds,joules\n";
  for (const auto& r : rows) {
    const std::string cfg = config_columns(r);
    for (size_t i = 0; i < r.measurement.runs.size(); ++i) {
      const RunSample& s = r.measurement.runs[i];
      out << cfg << ',' << i + 1 << ',' << s.bytes << ',' << fmt("%.6f", s.seconds) << ','
          << opt(s.joules, "%.6f") << '\n';
    }
  }
}

std::vector<ReportRow> read_csv(std::istream& in) {
  std::vector<ReportRow> rows;
  std::string line;
  uint64_t n = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != kReportHeader) {
        throw Error(ErrorCode::kReport, "line " + std::to_string(n) + ": unexpected CSV header");
      }
      seen_header = true;
      continue;
    }
    if (line == kReportHeader) continue;  // concatenated files
    const auto f = split(line, ',');
    if (f.size() != 14) {
      throw Error(ErrorCode::kReport, "line " + std::to_string(n) + ": expected 14 columns, got " +
                                          std::to_string(f.size()));
    }
    ReportRow r;
    r.phase = f[0];
    const int level = parse_int<int>(f[2], "level", n);
    try {
      const bool leveled = f[1] == "zstd" || f[1] == "deflate" || f[1] == "zlib";
      r.codec = CodecSpec::parse(leveled ? f[1] + ":" + std::to_string(level) : f[1]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kReport, "line " + std::to_string(n) + ": " + e.what());
    }
    r.block_kib = parse_int<uint64_t>(f[3], "block_kib", n);
    r.threads = parse_int<int>(f[4], "threads", n);
    r.distribution = f[5];
    r.batch = parse_int<uint64_t>(f[6], "batch", n);
    r.measurement.run_count = parse_int<uint64_t>(f[7], "runs", n);
    r.measurement.bytes_processed = parse_int<uint64_t>(f[8], "bytes", n);
    r.measurement.wall_time = parse_real(f[9], "seconds", n).value_or(0.0);
    r.measurement.energy = parse_real(f[10], "joules", n);
    r.ratio = parse_real(f[13], "ratio", n);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ReportRow> read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIO, "cannot open " + path.string());
  try {
    return read_csv(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<Objective> parse_objectives(std::string_view text) {
  std::vector<Objective> out;
  for (const auto& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::kReport, "objective '" + item + "' lacks :min or :max");
    }
    Objective o;
    o.field = item.substr(0, colon);
    const std::string dir = item.substr(colon + 1);
    if (dir == "min") {
      o.direction = Direction::kMinimize;
    } else if (dir == "max") {
      o.direction = Direction::kMaximize;
    } else {
      throw Error(ErrorCode::kReport, "objective direction must be min or max: " + item);
    }
    if (std::find(kFields.begin(), kFields.end(), o.field) == kFields.end()) {
      throw Error(ErrorCode::kReport, "unknown objective field: " + o.field);
    }
    out.push_back(std::move(o));
  }
  if (out.empty()) throw Error(ErrorCode::kReport, "no objectives given");
  return out;
}

std::optional<double> row_field(const ReportRow& row, std::string_view field) {
  const Measurement& m = row.measurement;
  if (field == "ratio") return row.ratio;
  if (field == "seconds") return m.wall_time;
  if (field == "joules") return m.energy;
  if (field == "bytes") return static_cast<double>(m.bytes_processed);
  if (field == "mib_per_s") {
    if (!(m.wall_time > 0)) return std::nullopt;
    return throughput_mib_s(m);
  }
  if (field == "mb_per_j") return efficiency_mb_j(m);
  return std::nullopt;
}

bool dominates(const ReportRow& a, const ReportRow& b, const std::vector<Objective>& objectives) {
  bool strict = false;
  for (const auto& o : objectives) {
    const double x = *row_field(a, o.field);
    const double y = *row_field(b, o.field);
    const bool better = o.direction == Direction::kMinimize ? x < y : x > y;
    const bool worse = o.direction == Direction::kMinimize ? x > y : x < y;
    if (worse) return false;
    strict = strict || better;
  }
  return strict;
}

std::vector<ReportRow> pareto_frontier(const std::vector<ReportRow>& rows,
                                       const std::vector<Objective>& objectives) {
  for (size_t i = 0; i < rows.size(); ++i) {
    for (const auto& o : objectives) {
      if (!row_field(rows[i], o.field)) {
        throw Error(ErrorCode::kReport, "row " + std::to_string(i + 1) + " (" + rows[i].label() +
                                            ") has no value for " + o.field);
      }
    }
  }
  std::vector<ReportRow> out;
  for (size_t i = 0; i < rows.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < rows.size() && !dominated; ++j) {
      dominated = j != i && dominates(rows[j], rows[i], objectives);
    }
    if (!dominated) out.push_back(rows[i]);
  }
  return out;
}

void print_table(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << std::left << std::setw(10) << "phase" << std::setw(10) << "codec" << std::right
      << std::setw(7) << "block" << std::setw(5) << "p" << std::setw(10) << "dist"
      << std::setw(7) << "batch" << std::setw(12) << "MiB/s" << std::setw(10) << "MB/J"
      << std::setw(10) << "ratio%" << '\n';
  for (const auto& r : rows) {
    const auto thr = row_field(r, "mib_per_s");
    const auto eff = efficiency_mb_j(r.measurement);
    out << std::left << std::setw(10) << r.phase << std::setw(10) << r.codec.to_string()
        << std::right << std::setw(7) << r.block_kib << std::setw(5) << r.threads
        << std::setw(10) << (r.distribution.empty() ? "-" : r.distribution) << std::setw(7)
        << (r.batch ? std::to_string(r.batch) : "-") << std::setw(12)
        << (thr ? fmt("%.2f", *thr) : "-") << std::setw(10) << (eff ? fmt("%.3f", *eff) : "-")
        << std::setw(10) << (r.ratio ? fmt("%.2f", *r.ratio * 100) : "-") << '\n';
  }
}

}  // namespace ppcs
