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

#include "ppcs/metrics.h"

#include <chrono>
#include <exception>

#include "ppcs/error.h"

namespace ppcs {

Measurement measure(const Phase& phase, EnergyProbe& probe, int repeats) {
  if (repeats < 1) throw Error(ErrorCode::kPrecondition, "repeats must be >= 1");
  Measurement m;
  bool energy_ok = probe.available();
  double total_seconds = 0;
  double total_joules = 0;
  uint64_t total_bytes = 0;
  for (int r = 0; r < repeats; ++r) {
    EnergyReading before;
    if (energy_ok) {
      try {
        before = probe.read();
      } catch (const std::exception&) {
        energy_ok = false;
      }
    }
    const auto t0 = std::chrono::steady_clock::now();
    RunSample s;
    s.bytes = phase();
    const auto t1 = std::chrono::steady_clock::now();
    s.seconds = std::chrono::duration<double>(t1 - t0).count();
    if (energy_ok) {
      try {
        s.joules = energy_delta(before, probe.read());
        total_joules += *s.joules;
      } catch (const std::exception&) {
        energy_ok = false;
      }
    }
    total_seconds += s.seconds;
    total_bytes += s.bytes;
    m.runs.push_back(s);
  }
  m.run_count = static_cast<uint64_t>(repeats);
  m.wall_time = total_seconds / repeats;
  m.bytes_processed = total_bytes / static_cast<uint64_t>(repeats);
  if (energy_ok) m.energy = total_joules / repeats;
  return m;
}

double throughput_mib_s(const Measurement& m) {
  if (!(m.wall_time > 0)) throw Error(ErrorCode::kPrecondition, "wall time must be positive");
  return static_cast<double>(m.bytes_processed) / (1024.0 * 1024.0) / m.wall_time;
}

std::optional<double> efficiency_mb_j(const Measurement& m) {
  if (!m.energy || !(*m.energy > 0)) return std::nullopt;
  return static_cast<double>(m.bytes_processed) / 1e6 / *m.energy;
}

}  // namespace ppcs
