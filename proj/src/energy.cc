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

#include "ppcs/energy.h"

#include <algorithm>
#include <fstream>

namespace ppcs {

namespace fs = std::filesystem;

namespace {

bool read_number(const fs::path& path, double& out) {
  std::ifstream in(path);
  unsigned long long v = 0;
  if (!(in >> v)) return false;
  out = static_cast<double>(v);
  return true;
}

std::string read_line(const fs::path& path) {
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  return s;
}

}  // namespace

double energy_delta(const EnergyReading& before, const EnergyReading& after) {
  double d = after.joules - before.joules;
  if (d < 0 && after.wrap_joules > 0) d += after.wrap_joules;
  return d;
}

PowercapProbe::PowercapProbe(fs::path root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return;
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root, ec)) {
    const auto name = e.path().filename().string();
    // Top-level zones only: "intel-rapl:0", not "intel-rapl:0:0".
    if (name.rfind("intel-rapl:", 0) == 0 && name.find(':', 11) == std::string::npos) {
      dirs.push_back(e.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) {
    Zone z;
    z.energy_file = d / "energy_uj";
    z.name = read_line(d / "name");
    if (z.name.rfind("package", 0) != 0) continue;
    double probe = 0;
    if (!read_number(z.energy_file, probe)) continue;  // unreadable without privileges
    if (!read_number(d / "max_energy_range_uj", z.range_uj)) z.range_uj = 0;
    zones_.push_back(std::move(z));
  }
}

std::string PowercapProbe::domain() const {
  std::string out;
  for (const auto& z : zones_) {
    if (!out.empty()) out += "+";
    out += z.name;
  }
  return out.empty() ? "none" : out;
}

EnergyReading PowercapProbe::read() {
  std::lock_guard lock(mu_);
  double total_uj = 0;
  for (auto& z : zones_) {
    double now = 0;
    if (read_number(z.energy_file, now)) {
      if (z.last_uj >= 0) {
        double d = now - z.last_uj;
        if (d < 0 && z.range_uj > 0) d += z.range_uj;
        if (d > 0) z.accumulated_uj += d;
      }
      z.last_uj = now;
    }
    total_uj += z.accumulated_uj;
  }
  return {total_uj * 1e-6, 0.0};
}

std::unique_ptr<EnergyProbe> make_energy_probe(EnergyMode mode) {
  if (mode == EnergyMode::kAuto) {
    auto p = std::make_unique<PowercapProbe>();
    if (p->available()) return p;
  }
  return std::make_unique<NullProbe>();
}

}  // namespace ppcs
