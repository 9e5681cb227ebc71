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
#include <functional>
#include <optional>
#include <vector>

#include "ppcs/energy.h"

namespace ppcs {

struct RunSample {
  double seconds = 0;
  uint64_t bytes = 0;
  std::optional<double> joules;
};

struct Measurement {
  double wall_time = 0;  // mean seconds per run
  uint64_t bytes_processed = 0;
  std::optional<double> energy;  // mean joules per run
  uint64_t run_count = 0;
  std::vector<RunSample> runs;
};

// The measured phase returns the number of bytes it processed.
using Phase = std::function<uint64_t()>;

// Runs `phase` `repeats` times and averages. Energy is recorded only when
// the probe is available and every read succeeds.
Measurement measure(const Phase& phase, EnergyProbe& probe, int repeats);

double throughput_mib_s(const Measurement& m);
std::optional<double> efficiency_mb_j(const Measurement& m);

}  // namespace ppcs
