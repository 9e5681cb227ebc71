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

#include <string>
#include <string_view>

namespace ppcs {

// Sortable composite key. The encoded form orders entries by extension, then
// basename, then content id, so files of one language and one name end up in
// adjacent blocks.
struct PpcKey {
  std::string extension;  // lowercased, possibly empty
  std::string basename;   // nonempty
  std::string content_id;

  auto operator<=>(const PpcKey&) const = default;
  bool operator==(const PpcKey&) const = default;
};

constexpr char kKeySeparator = '\0';

// Splits `canonical_name` at its last '.'; throws kInvalidName on empty input
// or embedded NUL bytes.
PpcKey derive_key(std::string_view canonical_name, std::string_view content_id);

// extension NUL basename NUL content_id
std::string encode(const PpcKey& key);

// Inverse of encode; throws kMalformedKey unless there are exactly two
// separators and nonempty basename and content id.
PpcKey decode(std::string_view bytes);

// "h.doxygen/<id>" style rendering for logs and the CLI.
std::string display(const PpcKey& key);

std::string to_hex(std::string_view bytes);
std::string from_hex(std::string_view hex);

}  // namespace ppcs
