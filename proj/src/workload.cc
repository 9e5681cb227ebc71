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

#include "ppcs/workload.h"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ppcs/error.h"
#include "ppcs/file.h"
#include "ppcs/ppc_key.h"
#include "ppcs/prng.h"

namespace ppcs {

namespace {

constexpr const char* kWorkloadMagic = "# ppcs-workload v1";

// i^alpha; the common -1.5 case avoids pow() so results are correctly
// rounded everywhere.
double rank_weight(uint64_t i, double alpha) {
  const double x = static_cast<double>(i);
  if (alpha == -1.5) return 1.0 / (x * std::sqrt(x));
  return std::pow(x, alpha);
}

std::vector<std::string> pick(std::span<const std::string> universe, const std::vector<size_t>& idx) {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (size_t i : idx) out.push_back(universe[i]);
  return out;
}

}  // namespace

std::string_view distribution_name(Distribution d) {
  return d == Distribution::kPowerLaw ? "powerlaw" : "uniform";
}

Distribution parse_distribution(std::string_view text) {
  if (text == "uniform" || text == "uniform_distinct") return Distribution::kUniformDistinct;
  if (text == "powerlaw" || text == "power_law") return Distribution::kPowerLaw;
  throw Error(ErrorCode::kSpec, "unknown distribution '" + std::string(text) + "'");
}

void WorkloadSpec::validate(size_t universe_size) const {
  if (num_queries < 1) throw Error(ErrorCode::kSpec, "num_queries must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::kSpec, "batch_size must be >= 1");
  if (universe_size == 0) throw Error(ErrorCode::kSpec, "empty key universe");
  if (distribution == Distribution::kUniformDistinct && num_queries > universe_size) {
    throw Error(ErrorCode::kSpec, "uniform_distinct needs num_queries <= universe size (" +
                                      std::to_string(num_queries) + " > " +
                                      std::to_string(universe_size) + ")");
  }
  if (distribution == Distribution::kPowerLaw && !(alpha < 0)) {
    throw Error(ErrorCode::kSpec, "power-law alpha must be negative");
  }
}

std::vector<size_t> sample_uniform_distinct_indices(const WorkloadSpec& spec, size_t n) {
  WorkloadSpec s = spec;
  s.distribution = Distribution::kUniformDistinct;
  s.validate(n);
  Xoshiro256 rng(spec.seed);
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  for (size_t i = 0; i < spec.num_queries; ++i) {
    const size_t j = i + static_cast<size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(spec.num_queries);
  return idx;
}

PowerLawDraws sample_power_law_ranks(const WorkloadSpec& spec, size_t n) {
  WorkloadSpec s = spec;
  s.distribution = Distribution::kPowerLaw;
  s.validate(n);
  Xoshiro256 rng(spec.seed);

  PowerLawDraws d;
  d.permutation.resize(n);
  std::iota(d.permutation.begin(), d.permutation.end(), size_t{0});
  for (size_t i = n - 1; i > 0; --i) {
    std::swap(d.permutation[i], d.permutation[static_cast<size_t>(rng.below(i + 1))]);
  }

  std::vector<double> cumulative(n);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    total += rank_weight(i + 1, spec.alpha);
    cumulative[i] = total;
  }

  d.ranks.reserve(spec.num_queries);
  for (uint64_t q = 0; q < spec.num_queries; ++q) {
    const double target = rng.unit() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    d.ranks.push_back(std::min(static_cast<size_t>(it - cumulative.begin()), n - 1));
  }
  return d;
}

std::vector<size_t> sample_power_law_indices(const WorkloadSpec& spec, size_t n) {
  const auto d = sample_power_law_ranks(spec, n);
  std::vector<size_t> out;
  out.reserve(d.ranks.size());
  for (size_t r : d.ranks) out.push_back(d.permutation[r]);
  return out;
}

std::vector<std::string> sample_uniform_distinct(const WorkloadSpec& spec,
                                                 std::span<const std::string> universe) {
  return pick(universe, sample_uniform_distinct_indices(spec, universe.size()));
}

std::vector<std::string> sample_power_law(const WorkloadSpec& spec,
                                          std::span<const std::string> universe) {
  return pick(universe, sample_power_law_indices(spec, universe.size()));
}

std::vector<std::string> generate_workload(const WorkloadSpec& spec,
                                           std::span<const std::string> universe) {
  auto keys = spec.distribution == Distribution::kPowerLaw ? sample_power_law(spec, universe)
                                                           : sample_uniform_distinct(spec, universe);
  if (spec.ordered) std::sort(keys.begin(), keys.end());
  return keys;
}

std::string serialize_workload(const WorkloadSpec& spec, size_t universe_size,
                               std::span<const std::string> keys) {
  std::ostringstream out;
  out.precision(17);
  out << kWorkloadMagic << " distribution=" << distribution_name(spec.distribution)
      << " alpha=" << spec.alpha << " queries=" << spec.num_queries
      << " batch=" << spec.batch_size << " seed=" << spec.seed
      << " ordered=" << (spec.ordered ? 1 : 0) << " universe=" << universe_size
      << " prng=xoshiro256**\n";
  for (const auto& k : keys) out << to_hex(k) << "\n";
  return out.str();
}

void save_workload(const std::filesystem::path& path, const WorkloadSpec& spec,
                   size_t universe_size, std::span<const std::string> keys) {
  write_file_atomic(path, serialize_workload(spec, universe_size, keys));
}

LoadedWorkload load_workload(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIO, "cannot open workload " + path.string());
  std::string header;
  std::getline(in, header);
  if (header.rfind(kWorkloadMagic, 0) != 0) {
    throw Error(ErrorCode::kFormat, path.string() + ": not a workload file");
  }
  LoadedWorkload w;
  std::istringstream fields(header.substr(std::string(kWorkloadMagic).size()));
  std::string field;
  while (fields >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kFormat, "bad workload header field " + field);
    const auto name = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    if (name == "distribution") w.spec.distribution = parse_distribution(value);
    else if (name == "alpha") w.spec.alpha = std::stod(value);
    else if (name == "queries") w.spec.num_queries = std::stoull(value);
    else if (name == "batch") w.spec.batch_size = std::stoull(value);
    else if (name == "seed") w.spec.seed = std::stoull(value);
    else if (name == "ordered") w.spec.ordered = value == "1";
    else if (name == "universe") w.universe_size = std::stoull(value);
  }
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) w.keys.push_back(from_hex(line));
  }
  if (w.keys.size() != w.spec.num_queries) {
    throw Error(ErrorCode::kFormat, path.string() + ": key count disagrees with header");
  }
  return w;
}

}  // namespace ppcs
