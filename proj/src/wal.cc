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

#include "ppcs/wal.h"

#include <cerrno>

#include <unistd.h>

#include "ppcs/coding.h"
#include "ppcs/error.h"

namespace ppcs {

WalWriter::WalWriter(const std::filesystem::path& path, bool sync_each_record)
    : file_(path, /*truncate=*/false, /*buffer_bytes=*/0), sync_(sync_each_record) {}

void WalWriter::append(WalOp op, std::string_view key, std::string_view value) {
  std::string payload;
  payload.reserve(5 + key.size() + value.size());
  payload.push_back(static_cast<char>(op));
  put_fixed32(payload, static_cast<uint32_t>(key.size()));
  payload.append(key);
  payload.append(value);

  std::string record;
  record.reserve(payload.size() + 8);
  put_fixed32(record, static_cast<uint32_t>(payload.size()));
  record.append(payload);
  put_fixed32(record, crc32(payload));
  file_.append(record);
  if (sync_) file_.sync();
}

WalReplayResult replay_wal(const std::filesystem::path& path, const WalVisitor& visit) {
  const std::string data = read_file(path);
  WalReplayResult result;
  Reader r(data);
  while (!r.empty()) {
    uint32_t len = 0;
    std::string_view payload;
    uint32_t crc = 0;
    if (!r.read32(len) || !r.read_bytes(len, payload) || !r.read32(crc) ||
        crc32(payload) != crc || payload.size() < 5) {
      result.truncated = true;
      break;
    }
    const auto op = static_cast<WalOp>(payload[0]);
    const uint32_t klen = decode_fixed32(payload.data() + 1);
    if ((op != WalOp::kPut && op != WalOp::kDelete) || klen > payload.size() - 5) {
      result.truncated = true;
      break;
    }
    const auto key = payload.substr(5, klen);
    std::optional<std::string_view> value;
    if (op == WalOp::kPut) value = payload.substr(5 + klen);
    visit(op, key, value);
    ++result.records;
    result.valid_bytes = data.size() - r.remaining();
  }
  if (result.truncated) {
    if (::truncate(path.c_str(), static_cast<off_t>(result.valid_bytes)) != 0) {
      throw_io_error("truncate " + path.string(), errno);
    }
  }
  return result;
}

}  // namespace ppcs
