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

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "ppcs/table.h"

namespace ppcs {

// Ordered write buffer. Tombstones are stored as nullopt values. Concurrent
// readers share the lock; the single writer takes it exclusively.
class Memtable {
 public:
  void put(std::string key, std::optional<std::string> value);
  Lookup get(std::string_view key) const;

  // Sum of key and value lengths of the entries currently held.
  size_t raw_size() const;
  size_t size() const;
  bool empty() const { return size() == 0; }

  // Snapshot in key order.
  std::vector<Entry> entries() const;

  // Visits entries in key order under the shared lock.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    std::shared_lock lock(mu_);
    for (const auto& [k, v] : map_) fn(k, v);
  }

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, std::optional<std::string>, std::less<>> map_;
  size_t raw_size_ = 0;
};

}  // namespace ppcs
