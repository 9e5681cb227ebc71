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

#include "ppcs/energy.h"

namespace ppcs::testing {

// Raw counter register in microjoules that wraps at 2^32, like a 32-bit
// RAPL register. Each read advances the counter by `step_uj`; the first
// reading sits `headroom_uj` below the wrap point, so the second crosses it.
class WrappingProbe : public EnergyProbe {
 public:
  static constexpr uint64_t kRangeUj = uint64_t{1} << 32;

  WrappingProbe(uint64_t step_uj, uint64_t headroom_uj)
      : counter_uj_(kRangeUj - headroom_uj), step_uj_(step_uj) {}

  bool available() const override { return true; }
  std::string domain() const override { return "package-0"; }
  EnergyReading read() override {
    const uint64_t now = counter_uj_ % kRangeUj;
    counter_uj_ += step_uj_;
    ++reads_;
    return {static_cast<double>(now) * 1e-6, static_cast<double>(kRangeUj) * 1e-6};
  }

  int reads() const { return reads_; }

 private:
  uint64_t counter_uj_;
  uint64_t step_uj_;
  int reads_ = 0;
};

}  // namespace ppcs::testing
