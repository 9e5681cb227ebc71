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

#include "ppcs/memtable.h"

#include <mutex>

namespace ppcs {

namespace {

size_t value_size(const std::optional<std::string>& v) { return v ? v->size() : 0; }

}  // namespace

void Memtable::put(std::string key, std::optional<std::string> value) {
  std::unique_lock lock(mu_);
  auto it = map_.find(key);
  if (it != map_.end()) {
    raw_size_ -= value_size(it->second);
    raw_size_ += value_size(value);
    it->second = std::move(value);
    return;
  }
  raw_size_ += key.size() + value_size(value);
  map_.emplace(std::move(key), std::move(value));
}

Lookup Memtable::get(std::string_view key) const {
  std::shared_lock lock(mu_);
  auto it = map_.find(key);
  if (it == map_.end()) return {};
  if (!it->second) return {LookupKind::kDeleted, {}};
  return {LookupKind::kFound, *it->second};
}

size_t Memtable::raw_size() const {
  std::shared_lock lock(mu_);
  return raw_size_;
}

size_t Memtable::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

std::vector<Entry> Memtable::entries() const {
  std::shared_lock lock(mu_);
  std::vector<Entry> out;
  out.reserve(map_.size());
  for (const auto& [k, v] : map_) out.push_back({k, v});
  return out;
}

}  // namespace ppcs
