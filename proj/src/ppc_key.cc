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

#include "ppcs/ppc_key.h"

#include <algorithm>

#include "ppcs/error.h"

namespace ppcs {

namespace {

bool has_nul(std::string_view s) { return s.find(kKeySeparator) != std::string_view::npos; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
  });
  return out;
}

void check_valid(const PpcKey& key) {
  if (key.basename.empty()) throw Error(ErrorCode::kMalformedKey, "empty basename");
  if (key.content_id.empty()) throw Error(ErrorCode::kMalformedKey, "empty content id");
  if (has_nul(key.extension) || has_nul(key.basename) || has_nul(key.content_id)) {
    throw Error(ErrorCode::kMalformedKey, "key field contains separator byte");
  }
}

}  // namespace

PpcKey derive_key(std::string_view canonical_name, std::string_view content_id) {
  if (canonical_name.empty()) throw Error(ErrorCode::kInvalidName, "empty filename");
  if (content_id.empty()) throw Error(ErrorCode::kInvalidName, "empty content id");
  if (has_nul(canonical_name) || has_nul(content_id)) {
    throw Error(ErrorCode::kInvalidName, "embedded NUL byte");
  }
  PpcKey key;
  key.content_id = std::string(content_id);
  const auto dot = canonical_name.rfind('.');
  if (dot == std::string_view::npos || dot + 1 == canonical_name.size()) {
    key.basename = std::string(canonical_name);
  } else {
    key.extension = ascii_lower(canonical_name.substr(dot + 1));
    key.basename = std::string(canonical_name.substr(0, dot));
  }
  // Dotfiles such as ".bashrc" would otherwise have an empty basename.
  if (key.basename.empty()) {
    key.basename = std::string(canonical_name);
    key.extension.clear();
  }
  return key;
}

std::string encode(const PpcKey& key) {
  check_valid(key);
  std::string out;
  out.reserve(key.extension.size() + key.basename.size() + key.content_id.size() + 2);
  out.append(key.extension);
  out.push_back(kKeySeparator);
  out.append(key.basename);
  out.push_back(kKeySeparator);
  out.append(key.content_id);
  return out;
}

PpcKey decode(std::string_view bytes) {
  const auto first = bytes.find(kKeySeparator);
  if (first == std::string_view::npos) throw Error(ErrorCode::kMalformedKey, "no separator");
  const auto second = bytes.find(kKeySeparator, first + 1);
  if (second == std::string_view::npos) throw Error(ErrorCode::kMalformedKey, "one separator");
  if (bytes.find(kKeySeparator, second + 1) != std::string_view::npos) {
    throw Error(ErrorCode::kMalformedKey, "more than two separators");
  }
  PpcKey key{std::string(bytes.substr(0, first)),
             std::string(bytes.substr(first + 1, second - first - 1)),
             std::string(bytes.substr(second + 1))};
  check_valid(key);
  return key;
}

std::string display(const PpcKey& key) {
  std::string out = key.extension;
  if (!out.empty()) out.push_back('.');
  out += key.basename;
  out.push_back('/');
  out += key.content_id;
  return out;
}

std::string to_hex(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 15]);
  }
  return out;
}

std::string from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw Error(ErrorCode::kDecode, "odd-length hex string");
  std::string out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::kDecode, "invalid hex digit");
    out.push_back(static_cast<char>((hi << 4) | lo));
  }
  return out;
}

}  // namespace ppcs
