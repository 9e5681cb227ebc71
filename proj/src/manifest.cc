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

#include "ppcs/manifest.h"

#include <cstdio>
#include <sstream>

#include "ppcs/error.h"

namespace ppcs {

namespace {

constexpr const char* kHeader = "ppcs-manifest 1";

Error bad_line(size_t line, const std::string& what) {
  return Error(ErrorCode::kRecovery, "MANIFEST line " + std::to_string(line) + ": " + what);
}

std::string numbered(const char* prefix, uint64_t number, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%06llu%s", prefix, static_cast<unsigned long long>(number),
                suffix);
  return buf;
}

}  // namespace

std::string table_file_name(uint64_t number) { return numbered("tbl-", number, ".ppcs"); }

std::string wal_file_name(uint64_t number) { return numbered("wal-", number, ".log"); }

std::string Manifest::serialize() const {
  std::ostringstream out;
  out << kHeader << "\n";
  out << "sequence " << next_sequence << "\n";
  out << "log " << log_number << "\n";
  for (const auto& t : tables) {
    out << "table " << t.level << " " << t.number << " " << t.tombstones << "\n";
  }
  return out.str();
}

Manifest Manifest::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  Manifest m;
  bool saw_sequence = false;
  bool saw_log = false;
  if (!std::getline(in, line) || line != kHeader) throw bad_line(1, "missing header");
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "sequence") {
      if (!(fields >> m.next_sequence)) throw bad_line(line_no, "bad sequence");
      saw_sequence = true;
    } else if (tag == "log") {
      if (!(fields >> m.log_number)) throw bad_line(line_no, "bad log number");
      saw_log = true;
    } else if (tag == "table") {
      ManifestTable t;
      if (!(fields >> t.level >> t.number >> t.tombstones) || (t.level != 0 && t.level != 1)) {
        throw bad_line(line_no, "bad table entry");
      }
      m.tables.push_back(t);
    } else {
      throw bad_line(line_no, "unknown record '" + tag + "'");
    }
    std::string extra;
    if (fields >> extra) throw bad_line(line_no, "trailing data");
  }
  if (!saw_sequence || !saw_log) throw bad_line(line_no, "missing sequence or log record");
  for (const auto& t : m.tables) {
    if (t.number >= m.next_sequence) throw bad_line(line_no, "table number beyond sequence");
  }
  return m;
}

}  // namespace ppcs
