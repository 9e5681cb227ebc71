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

// Write-ahead log segment. Each record is
//   [4B payload length][payload][4B CRC32(payload)]
// with payload = [1B op][4B key length][key][value]. Records are handed to
// the kernel one write(2) at a time, so an acknowledged append survives a
// process crash; `sync` additionally survives power loss.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "ppcs/file.h"

namespace ppcs {

enum class WalOp : uint8_t { kPut = 1, kDelete = 2 };

class WalWriter {
 public:
  WalWriter(const std::filesystem::path& path, bool sync_each_record);

  void append(WalOp op, std::string_view key, std::string_view value);
  uint64_t size() const { return file_.size(); }
  void close() { file_.close(); }

 private:
  WritableFile file_;
  bool sync_;
};

struct WalReplayResult {
  uint64_t records = 0;
  uint64_t valid_bytes = 0;
  bool truncated = false;  // a torn or corrupt tail was cut off
};

using WalVisitor =
    std::function<void(WalOp op, std::string_view key, std::optional<std::string_view> value)>;

// Replays every intact record. A torn or corrupt tail is truncated from the
// file; nothing after the first bad record is applied.
WalReplayResult replay_wal(const std::filesystem::path& path, const WalVisitor& visit);

}  // namespace ppcs
