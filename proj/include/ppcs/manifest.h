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

// Text manifest of the live table set:
//
//   ppcs-manifest 1
//   sequence <next file number>
//   log <oldest live WAL number>
//   table <level> <file number> <tombstone count>
//   ...
//
// Tables are listed L0 newest-first, then L1 in key order. The file is
// replaced atomically (write temp, fsync, rename).

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ppcs {

struct ManifestTable {
  int level = 0;
  uint64_t number = 0;
  uint64_t tombstones = 0;

  bool operator==(const ManifestTable&) const = default;
};

struct Manifest {
  uint64_t next_sequence = 1;
  uint64_t log_number = 0;
  std::vector<ManifestTable> tables;

  std::string serialize() const;
  // Throws kRecovery on any malformed line.
  static Manifest parse(const std::string& text);

  bool operator==(const Manifest&) const = default;
};

std::string table_file_name(uint64_t number);
std::string wal_file_name(uint64_t number);

}  // namespace ppcs
