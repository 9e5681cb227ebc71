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

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace ppcs {

// A cumulative energy reading. `wrap_joules` is the counter range when the
// value is a raw hardware register that may wrap, zero when the probe
// already corrects wraps itself.
struct EnergyReading {
  double joules = 0.0;
  double wrap_joules = 0.0;
};

// after - before, adding one counter range when the register wrapped.
double energy_delta(const EnergyReading& before, const EnergyReading& after);

class EnergyProbe {
 public:
  virtual ~EnergyProbe() = default;
  virtual bool available() const = 0;
  virtual std::string domain() const = 0;
  virtual EnergyReading read() = 0;
};

class NullProbe : public EnergyProbe {
 public:
  bool available() const override { return false; }
  std::string domain() const override { return "none"; }
  EnergyReading read() override { return {}; }
};

// Package-level RAPL counters exposed through the powercap sysfs tree
// (…/intel-rapl:N/energy_uj). Packages are summed; each package wraps at its
// own max_energy_range_uj and is corrected independently, so read() is
// non-decreasing.
class PowercapProbe : public EnergyProbe {
 public:
  explicit PowercapProbe(std::filesystem::path root = "/sys/class/powercap");

  bool available() const override { return !zones_.empty(); }
  std::string domain() const override;
  EnergyReading read() override;

 private:
  struct Zone {
    std::filesystem::path energy_file;
    std::string name;
    double range_uj = 0;
    double last_uj = -1;
    double accumulated_uj = 0;
  };
  std::mutex mu_;
  std::vector<Zone> zones_;
};

enum class EnergyMode { kAuto, kOff };

// Powercap when readable, otherwise the null probe.
std::unique_ptr<EnergyProbe> make_energy_probe(EnergyMode mode);

}  // namespace ppcs
