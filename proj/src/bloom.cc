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

#include "ppcs/bloom.h"

#include <algorithm>
#include <cmath>

#include "ppcs/coding.h"
#include "ppcs/error.h"

namespace ppcs {

namespace {

constexpr uint64_t kSeed = 0x9e3779b97f4a7c15ULL;

inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

uint64_t bloom_hash(std::string_view key) {
  uint64_t h = kSeed ^ (key.size() * 0xff51afd7ed558ccdULL);
  size_t i = 0;
  for (; i + 8 <= key.size(); i += 8) {
    h = mix64(h ^ decode_fixed64(key.data() + i));
  }
  uint64_t tail = 0;
  for (size_t j = 0; i + j < key.size(); ++j) {
    tail |= static_cast<uint64_t>(static_cast<unsigned char>(key[i + j])) << (8 * j);
  }
  return mix64(h ^ tail ^ 0x2545f4914f6cdd1dULL);
}

BloomFilter BloomFilter::build(const std::vector<uint64_t>& key_hashes, double bits_per_key) {
  if (!(bits_per_key > 0)) throw Error(ErrorCode::kConfig, "bits_per_key must be positive");
  BloomFilter f;
  f.k_ = static_cast<uint32_t>(std::clamp(std::lround(bits_per_key * 0.69314718055994530942), 1L, 30L));
  if (key_hashes.empty()) return f;
  uint64_t bits = static_cast<uint64_t>(std::ceil(static_cast<double>(key_hashes.size()) * bits_per_key));
  bits = std::max<uint64_t>(bits, 64);
  bits = (bits + 7) / 8 * 8;
  f.num_bits_ = bits;
  f.bits_.assign(bits / 8, 0);
  for (uint64_t h : key_hashes) {
    uint64_t delta = mix64(h) | 1;
    uint64_t pos = h;
    for (uint32_t i = 0; i < f.k_; ++i) {
      uint64_t bit = pos % bits;
      f.bits_[bit >> 3] |= static_cast<uint8_t>(1u << (bit & 7));
      pos += delta;
    }
  }
  return f;
}

bool BloomFilter::may_contain_hash(uint64_t hash) const {
  if (num_bits_ == 0) return false;
  uint64_t delta = mix64(hash) | 1;
  uint64_t pos = hash;
  for (uint32_t i = 0; i < k_; ++i) {
    uint64_t bit = pos % num_bits_;
    if ((bits_[bit >> 3] & (1u << (bit & 7))) == 0) return false;
    pos += delta;
  }
  return true;
}

// [4B k][8B num_bits][num_bits / 8 bytes]
std::string BloomFilter::serialize() const {
  std::string out;
  out.reserve(12 + bits_.size());
  put_fixed32(out, k_);
  put_fixed64(out, num_bits_);
  out.append(reinterpret_cast<const char*>(bits_.data()), bits_.size());
  return out;
}

BloomFilter BloomFilter::deserialize(std::string_view data) {
  Reader r(data);
  BloomFilter f;
  if (!r.read32(f.k_) || !r.read64(f.num_bits_)) throw Error(ErrorCode::kFormat, "bloom header truncated");
  if (f.num_bits_ % 8 != 0 || r.remaining() != f.num_bits_ / 8 || f.k_ == 0 || f.k_ > 30) {
    throw Error(ErrorCode::kFormat, "bloom section inconsistent");
  }
  std::string_view bytes;
  r.read_bytes(f.num_bits_ / 8, bytes);
  f.bits_.assign(bytes.begin(), bytes.end());
  return f;
}

double BloomFilter::expected_fp_rate(uint64_t num_keys, uint64_t num_bits, uint32_t k) {
  if (num_bits == 0) return 0.0;
  double kn_over_m = static_cast<double>(k) * static_cast<double>(num_keys) / static_cast<double>(num_bits);
  return std::pow(1.0 - std::exp(-kn_over_m), static_cast<double>(k));
}

}  // namespace ppcs
