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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ppcs {

enum class Distribution { kUniformDistinct, kPowerLaw };

constexpr double kPowerLawAlpha = -1.5;

std::string_view distribution_name(Distribution d);
Distribution parse_distribution(std::string_view text);  // "uniform" | "powerlaw"

struct WorkloadSpec {
  Distribution distribution = Distribution::kUniformDistinct;
  double alpha = kPowerLawAlpha;
  uint64_t num_queries = 1;
  uint64_t batch_size = 1;  // 1 = single-get
  uint64_t seed = 0;
  // Issue the sampled keys in key order instead of sampling order.
  bool ordered = false;

  void validate(size_t universe_size) const;
};

// Indices into the universe; see sample_uniform_distinct / sample_power_law.
std::vector<size_t> sample_uniform_distinct_indices(const WorkloadSpec& spec, size_t universe_size);
// Power-law draws before mapping to keys: rank r (0-based, r = 0 hottest)
// is served by universe[permutation[r]].
struct PowerLawDraws {
  std::vector<size_t> permutation;
  std::vector<size_t> ranks;
};
PowerLawDraws sample_power_law_ranks(const WorkloadSpec& spec, size_t universe_size);
std::vector<size_t> sample_power_law_indices(const WorkloadSpec& spec, size_t universe_size);

// `num_queries` distinct keys via a partial Fisher-Yates shuffle.
std::vector<std::string> sample_uniform_distinct(const WorkloadSpec& spec,
                                                 std::span<const std::string> universe);
// i.i.d. draws with P(rank i) proportional to i^alpha; ranks are mapped to
// keys through a seeded permutation of the universe.
std::vector<std::string> sample_power_law(const WorkloadSpec& spec,
                                          std::span<const std::string> universe);

// Dispatches on spec.distribution and applies spec.ordered.
std::vector<std::string> generate_workload(const WorkloadSpec& spec,
                                           std::span<const std::string> universe);

template <typename T>
std::vector<std::vector<T>> make_batches(std::span<const T> items, size_t batch_size);

// Header line recording the spec, then one hex-encoded key per line.
std::string serialize_workload(const WorkloadSpec& spec, size_t universe_size,
                               std::span<const std::string> keys);
void save_workload(const std::filesystem::path& path, const WorkloadSpec& spec,
                   size_t universe_size, std::span<const std::string> keys);
struct LoadedWorkload {
  WorkloadSpec spec;
  size_t universe_size = 0;
  std::vector<std::string> keys;
};
LoadedWorkload load_workload(const std::filesystem::path& path);

}  // namespace ppcs

#include "ppcs/workload_inl.h"
