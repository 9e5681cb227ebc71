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

#include <algorithm>

#include "ppcs/error.h"

namespace ppcs {

template <typename T>
std::vector<std::vector<T>> make_batches(std::span<const T> items, size_t batch_size) {
  if (batch_size == 0) throw Error(ErrorCode::kSpec, "batch_size must be >= 1");
  std::vector<std::vector<T>> out;
  out.reserve((items.size() + batch_size - 1) / batch_size);
  for (size_t i = 0; i < items.size(); i += batch_size) {
    const size_t end = std::min(items.size(), i + batch_size);
    out.emplace_back(items.begin() + static_cast<std::ptrdiff_t>(i),
                     items.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

}  // namespace ppcs
