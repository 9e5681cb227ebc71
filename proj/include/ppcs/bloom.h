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
#include <vector>

namespace ppcs {

// Seeded 64-bit hash used for bloom probing. Stable across runs and
// platforms since filters are persisted.
uint64_t bloom_hash(std::string_view key);

// Standard bit-array bloom filter with k probes derived by double hashing.
class BloomFilter {
 public:
  BloomFilter() = default;

  // k = round(bits_per_key * ln 2), clamped to [1, 30].
  static BloomFilter build(const std::vector<uint64_t>& key_hashes, double bits_per_key);
  // Parses the serialized section; throws kFormat on malformed input.
  static BloomFilter deserialize(std::string_view data);

  std::string serialize() const;

  bool may_contain(std::string_view key) const { return may_contain_hash(bloom_hash(key)); }
  bool may_contain_hash(uint64_t hash) const;

  uint64_t num_bits() const { return num_bits_; }
  uint32_t num_probes() const { return k_; }

  // (1 - e^(-k n / m))^k
  static double expected_fp_rate(uint64_t num_keys, uint64_t num_bits, uint32_t k);

 private:
  uint64_t num_bits_ = 0;
  uint32_t k_ = 0;
  std::vector<uint8_t> bits_;
};

}  // namespace ppcs
