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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppcs/table.h"

namespace ppcs {

// K-way merge over tables ordered newest first. For each distinct key only
// the newest version is surfaced; older versions are skipped.
class MergingIterator {
 public:
  MergingIterator(const std::vector<std::shared_ptr<const Table>>& newest_first,
                  std::string_view from = {});

  bool valid() const { return !heap_.empty(); }
  std::string_view key() const;
  // nullopt marks a tombstone.
  std::optional<std::string_view> value() const;
  void next();

 private:
  struct Cursor {
    TableIterator it;
    size_t priority;  // 0 is newest
  };
  bool greater(size_t a, size_t b) const;
  void push(size_t i);
  size_t pop();

  std::vector<Cursor> cursors_;
  std::vector<size_t> heap_;  // min-heap of cursor indices by (key, priority)
};

}  // namespace ppcs
