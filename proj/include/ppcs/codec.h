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
#include <string>
#include <string_view>

namespace ppcs {

enum class Algorithm : uint8_t {
  kIdentity = 0,
  kZstd = 1,
  kDeflate = 2,
  kSnappy = 3,
};

// One point of the codec sweep. Level is meaningful for zstd (1..22) and
// deflate (1..9) only and is zero otherwise.
class CodecSpec {
 public:
  CodecSpec() = default;

  static CodecSpec identity() { return CodecSpec(Algorithm::kIdentity, 0); }
  static CodecSpec snappy() { return CodecSpec(Algorithm::kSnappy, 0); }
  static CodecSpec zstd(int level);
  static CodecSpec deflate(int level);
  // Validating constructor used when decoding persisted tags.
  static CodecSpec make(Algorithm algorithm, int level);

  // "identity", "snappy", "zstd:<level>", "deflate:<level>"
  static CodecSpec parse(std::string_view text);
  std::string to_string() const;

  Algorithm algorithm() const { return algorithm_; }
  int level() const { return level_; }
  std::string_view algorithm_name() const;

  bool operator==(const CodecSpec&) const = default;

 private:
  CodecSpec(Algorithm algorithm, int level) : algorithm_(algorithm), level_(level) {}

  Algorithm algorithm_ = Algorithm::kIdentity;
  int level_ = 0;
};

std::string compress(std::string_view raw, const CodecSpec& spec);

// `raw_size` is the expected decompressed length (persisted alongside every
// block); a mismatch or a corrupted frame is a kIntegrity error.
std::string decompress(std::string_view compressed, const CodecSpec& spec, size_t raw_size);

double compression_ratio(uint64_t compressed_size, uint64_t raw_size);

}  // namespace ppcs
