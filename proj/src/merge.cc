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

#include "ppcs/merge.h"

#include <algorithm>

namespace ppcs {

MergingIterator::MergingIterator(const std::vector<std::shared_ptr<const Table>>& newest_first,
                                 std::string_view from) {
  cursors_.reserve(newest_first.size());
  for (size_t i = 0; i < newest_first.size(); ++i) {
    cursors_.push_back({TableIterator(newest_first[i], from), i});
  }
  for (size_t i = 0; i < cursors_.size(); ++i) {
    if (cursors_[i].it.valid()) push(i);
  }
}

bool MergingIterator::greater(size_t a, size_t b) const {
  const auto ka = cursors_[a].it.key();
  const auto kb = cursors_[b].it.key();
  if (ka != kb) return ka > kb;
  return cursors_[a].priority > cursors_[b].priority;
}

void MergingIterator::push(size_t i) {
  heap_.push_back(i);
  std::push_heap(heap_.begin(), heap_.end(), [this](size_t a, size_t b) { return greater(a, b); });
}

size_t MergingIterator::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), [this](size_t a, size_t b) { return greater(a, b); });
  size_t i = heap_.back();
  heap_.pop_back();
  return i;
}

std::string_view MergingIterator::key() const { return cursors_[heap_.front()].it.key(); }

std::optional<std::string_view> MergingIterator::value() const {
  return cursors_[heap_.front()].it.value();
}

void MergingIterator::next() {
  const std::string current(key());
  // Advance every cursor positioned on the current key.
  while (!heap_.empty() && cursors_[heap_.front()].it.key() == current) {
    size_t i = pop();
    cursors_[i].it.next();
    if (cursors_[i].it.valid()) push(i);
  }
}

}  // namespace ppcs
