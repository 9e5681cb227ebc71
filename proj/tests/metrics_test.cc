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

#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "fake_probe.h"
#include "ppcs/energy.h"
#include "ppcs/error.h"
#include "test_util.h"

namespace ppcs {
namespace {

using namespace std::chrono_literals;

TEST(Measure, NullProbeIsTimeOnly) {
  NullProbe probe;
  const auto m = measure([] {
    std::this_thread::sleep_for(100ms);
    return uint64_t{1000};
  }, probe, 1);
  EXPECT_GE(m.wall_time, 0.1);
  EXPECT_LT(m.wall_time, 0.3);
  EXPECT_FALSE(m.energy.has_value());
  EXPECT_FALSE(efficiency_mb_j(m).has_value());
  EXPECT_EQ(m.bytes_processed, 1000u);
}

TEST(Measure, RepeatsAreAveraged) {
  NullProbe probe;
  int calls = 0;
  const auto m = measure([&] { return uint64_t{100} * static_cast<uint64_t>(++calls); }, probe, 5);
  EXPECT_EQ(m.run_count, 5u);
  EXPECT_EQ(calls, 5);
  ASSERT_EQ(m.runs.size(), 5u);
  EXPECT_EQ(m.bytes_processed, 300u);  // mean of 100..500
  double sum = 0;
  for (const auto& r : m.runs) sum += r.seconds;
  EXPECT_DOUBLE_EQ(m.wall_time, sum / 5);
}

TEST(Measure, RejectsZeroRepeats) {
  NullProbe probe;
  EXPECT_THROW(measure([] { return uint64_t{0}; }, probe, 0), Error);
}

TEST(Measure, CounterWrapIsCorrected) {
  // 5 J per read step, first reading 2 J below the 2^32 uJ wrap point.
  testing::WrappingProbe probe(5'000'000, 2'000'000);
  const auto m = measure([] { return uint64_t{1} << 20; }, probe, 1);
  ASSERT_TRUE(m.energy.has_value());
  EXPECT_NEAR(*m.energy, 5.0, 1e-6);
  ASSERT_TRUE(m.runs[0].joules.has_value());
  EXPECT_GT(*m.runs[0].joules, 0.0);
  EXPECT_NEAR(*efficiency_mb_j(m), (1 << 20) / 1e6 / 5.0, 1e-9);
}

TEST(EnergyDelta, WrapArithmetic) {
  EXPECT_DOUBLE_EQ(energy_delta({10.0, 0}, {12.5, 0}), 2.5);
  EXPECT_DOUBLE_EQ(energy_delta({4290.0, 4294.967296}, {1.0, 4294.967296}), 1.0 + 4294.967296 - 4290.0);
}

TEST(Units, BinaryThroughputDecimalEfficiency) {
  Measurement m;
  m.bytes_processed = uint64_t{1} << 30;
  m.wall_time = 2.0;
  EXPECT_DOUBLE_EQ(throughput_mib_s(m), 512.0);
  m.energy = 1000.0;
  EXPECT_DOUBLE_EQ(*efficiency_mb_j(m), 1073.741824 / 1000.0);
}

void write_text(const std::filesystem::path& p, const std::string& s) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::trunc) << s;
}

TEST(PowercapProbe, SumsPackagesAndCorrectsWraps) {
  testing::TempDir root;
  auto zone = [&](const std::string& dir, const std::string& name, uint64_t uj, uint64_t range) {
    write_text(root / dir / "name", name + "\n");
    write_text(root / dir / "energy_uj", std::to_string(uj) + "\n");
    write_text(root / dir / "max_energy_range_uj", std::to_string(range) + "\n");
  };
  zone("intel-rapl:0", "package-0", 999'000'000, 1'000'000'000);
  zone("intel-rapl:1", "package-1", 5'000'000, 1'000'000'000);
  zone("intel-rapl:0:0", "core", 1, 1'000'000'000);  // subzone, ignored
  zone("intel-rapl:2", "psys", 1, 1'000'000'000);    // not a package
  PowercapProbe probe(root.path());
  ASSERT_TRUE(probe.available());
  EXPECT_EQ(probe.domain(), "package-0+package-1");
  const auto a = probe.read();
  write_text(root / "intel-rapl:0" / "energy_uj", "3000000\n");  // wrapped: +4 J
  write_text(root / "intel-rapl:1" / "energy_uj", "6000000\n");  // +1 J
  const auto b = probe.read();
  EXPECT_NEAR(energy_delta(a, b), 5.0, 1e-9);
}

TEST(PowercapProbe, MissingTreeIsUnavailable) {
  PowercapProbe probe("/nonexistent/powercap");
  EXPECT_FALSE(probe.available());
  EXPECT_EQ(make_energy_probe(EnergyMode::kOff)->available(), false);
}

}  // namespace
}  // namespace ppcs
