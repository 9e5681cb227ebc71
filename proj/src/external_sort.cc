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

#include <algorithm>
#include <fstream>
#include <queue>

#include "ppcs/coding.h"
#include "ppcs/error.h"
#include "ppcs/file.h"

namespace ppcs {

namespace fs = std::filesystem;

namespace {

// Per-pair overhead charged against the budget besides the key/value bytes.
constexpr uint64_t kPairOverhead = 64;

class RunReader {
 public:
  explicit RunReader(const fs::path& path) : buf_(1 << 20) {
    in_.rdbuf()->pubsetbuf(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    in_.open(path, std::ios::binary);
    if (!in_) throw Error(ErrorCode::kIO, "cannot open sort run " + path.string());
    path_ = path;
  }

  bool next() {
    char hdr[8];
    in_.read(hdr, 8);
    if (in_.gcount() == 0 && in_.eof()) return false;
    if (in_.gcount() != 8) throw Error(ErrorCode::kIO, "truncated sort run " + path_.string());
    key.resize(decode_fixed32(hdr));
    value.resize(decode_fixed32(hdr + 4));
    in_.read(key.data(), static_cast<std::streamsize>(key.size()));
    in_.read(value.data(), static_cast<std::streamsize>(value.size()));
    if (!in_) throw Error(ErrorCode::kIO, "truncated sort run " + path_.string());
    return true;
  }

  std::string key;
  std::string value;

 private:
  std::vector<char> buf_;
  std::ifstream in_;
  fs::path path_;
};

}  // namespace

ExternalSorter::ExternalSorter(fs::path temp_dir, uint64_t memory_budget)
    : temp_dir_(std::move(temp_dir)), memory_budget_(std::max<uint64_t>(memory_budget, 1)) {
  fs::create_directories(temp_dir_);
}

ExternalSorter::~ExternalSorter() { remove_runs(); }

void ExternalSorter::remove_runs() {
  std::error_code ec;
  for (const auto& r : runs_) fs::remove(r, ec);
}

void ExternalSorter::add(std::string key, std::string value) {
  if (finished_) throw Error(ErrorCode::kPrecondition, "ExternalSorter already finished");
  buffered_bytes_ += key.size() + value.size() + kPairOverhead;
  buffer_.emplace_back(std::move(key), std::move(value));
  ++count_;
  if (buffered_bytes_ >= memory_budget_) spill();
}

void ExternalSorter::spill() {
  std::stable_sort(buffer_.begin(), buffer_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const fs::path path = temp_dir_ / ("run-" + std::to_string(runs_.size()) + ".tmp");
  runs_.push_back(path);
  WritableFile out(path, /*truncate=*/true);
  std::string hdr;
  for (const auto& [k, v] : buffer_) {
    hdr.clear();
    put_fixed32(hdr, static_cast<uint32_t>(k.size()));
    put_fixed32(hdr, static_cast<uint32_t>(v.size()));
    out.append(hdr);
    out.append(k);
    out.append(v);
  }
  out.close();
  buffer_.clear();
  buffer_.shrink_to_fit();
  buffered_bytes_ = 0;
}

void ExternalSorter::finish(const Visitor& visit) {
  if (finished_) throw Error(ErrorCode::kPrecondition, "ExternalSorter already finished");
  finished_ = true;
  if (runs_.empty()) {
    std::stable_sort(buffer_.begin(), buffer_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [k, v] : buffer_) visit(k, v);
    buffer_.clear();
    return;
  }
  if (!buffer_.empty()) spill();

  std::vector<std::unique_ptr<RunReader>> readers;
  for (const auto& r : runs_) readers.push_back(std::make_unique<RunReader>(r));
  // Ties resolve to the lower run index, which preserves insertion order.
  auto greater = [&](size_t a, size_t b) {
    const int c = readers[a]->key.compare(readers[b]->key);
    return c != 0 ? c > 0 : a > b;
  };
  std::priority_queue<size_t, std::vector<size_t>, decltype(greater)> heap(greater);
  for (size_t i = 0; i < readers.size(); ++i) {
    if (readers[i]->next()) heap.push(i);
  }
  while (!heap.empty()) {
    const size_t i = heap.top();
    heap.pop();
    visit(readers[i]->key, readers[i]->value);
    if (readers[i]->next()) heap.push(i);
  }
  readers.clear();
  remove_runs();
  runs_.clear();
}

}  // namespace ppcs
