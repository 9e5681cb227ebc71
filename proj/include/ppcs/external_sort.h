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
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ppcs {

// Sorts (key, value) pairs by key bytes using bounded memory: pairs are
// buffered until `memory_budget` bytes, then spilled as a sorted run file
// under `temp_dir`; finish() k-way merges the runs. Equal keys keep
// insertion order.
class ExternalSorter {
 public:
  using Visitor = std::function<void(std::string_view key, std::string_view value)>;

  ExternalSorter(std::filesystem::path temp_dir, uint64_t memory_budget);
  ~ExternalSorter();
  ExternalSorter(const ExternalSorter&) = delete;
  ExternalSorter& operator=(const ExternalSorter&) = delete;

  void add(std::string key, std::string value);

  // Single use. Run files are removed afterwards.
  void finish(const Visitor& visit);

  uint64_t runs_spilled() const { return runs_.size(); }
  uint64_t count() const { return count_; }

 private:
  void spill();
  void remove_runs();

  std::filesystem::path temp_dir_;
  uint64_t memory_budget_;
  std::vector<std::pair<std::string, std::string>> buffer_;
  uint64_t buffered_bytes_ = 0;
  uint64_t count_ = 0;
  std::vector<std::filesystem::path> runs_;
  bool finished_ = false;
};

}  // namespace ppcs
