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

#include "ppcs/bench.h"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fake_probe.h"
#include "ppcs/error.h"
#include "ppcs/synth_corpus.h"
#include "test_util.h"

namespace ppcs {
namespace {

class BenchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SynthCorpusOptions o;
    o.num_files = 600;
    o.target_bytes = 600 * 3000;
    o.files_per_family = 20;
    corpus_ = dir_ / "corpus.jsonl";
    write_synthetic_corpus(corpus_, o);
  }

  BuildOptions build_options(const std::string& name) const {
    BuildOptions b;
    b.store.data_dir = dir_ / name;
    b.store.write_buffer_bytes = kMiB;
    b.store.target_block_size = 16 * kKiB;
    b.store.compaction_threads = 2;
    b.sort_memory_bytes = 256 * kKiB;  // forces spilled sort runs
    return b;
  }

  testing::TempDir dir_;
  std::filesystem::path corpus_;
  NullProbe probe_;
};

TEST_F(BenchTest, BuildThenVerify) {
  const auto r = cmd_build(corpus_, build_options("s"), probe_);
  EXPECT_EQ(r.records, 600u);
  ASSERT_TRUE(r.row.ratio.has_value());
  EXPECT_LT(*r.row.ratio, 0.6);
  EXPECT_EQ(r.row.phase, "build");
  EXPECT_FALSE(r.row.measurement.energy.has_value());
  StoreConfig c = build_options("s").store;
  const auto e = Engine::open(c);
  const auto v = cmd_verify(*e, corpus_);
  EXPECT_TRUE(v.ok()) << (v.diffs.empty() ? "" : v.diffs[0]);
  EXPECT_EQ(v.matched, 600u);
}

TEST_F(BenchTest, RebuildIsBitExact) {
  const auto a = cmd_build(corpus_, build_options("a"), probe_);
  const auto b = cmd_build(corpus_, build_options("b"), probe_);
  EXPECT_EQ(a.row.ratio, b.row.ratio);
  EXPECT_EQ(a.row.measurement.bytes_processed, b.row.measurement.bytes_processed);
  // Rebuilding into the same directory replaces the old store.
  const auto again = cmd_build(corpus_, build_options("a"), probe_);
  EXPECT_EQ(again.row.ratio, a.row.ratio);
}

TEST_F(BenchTest, RandomKeyOrderCompressesWorse) {
  auto ppc = build_options("p");
  auto rnd = build_options("r");
  rnd.key_order = KeyOrder::kRandom;
  const double a = *cmd_build(corpus_, ppc, probe_).row.ratio;
  const double b = *cmd_build(corpus_, rnd, probe_).row.ratio;
  EXPECT_LT(a, b);
  const auto e = Engine::open(rnd.store);
  EXPECT_TRUE(cmd_verify(*e, corpus_, KeyOrder::kRandom).ok());
}

TEST_F(BenchTest, EmptyCorpusWarns) {
  const auto empty = dir_ / "empty.jsonl";
  std::ofstream(empty).close();
  const auto r = cmd_build(empty, build_options("e"), probe_);
  EXPECT_EQ(r.records, 0u);
  EXPECT_FALSE(r.warnings.empty());
}

TEST_F(BenchTest, RefusesToWipeUnrelatedDirectory) {
  auto b = build_options("foreign");
  std::filesystem::create_directories(b.store.data_dir);
  std::ofstream(b.store.data_dir / "precious.txt") << "x";
  EXPECT_THROW(cmd_build(corpus_, b, probe_), Error);
  EXPECT_TRUE(std::filesystem::exists(b.store.data_dir / "precious.txt"));
}

TEST_F(BenchTest, QueriesProcessSameBytesAtAnyThreadCount) {
  const auto b = build_options("q");
  cmd_build(corpus_, b, probe_);
  const auto e = Engine::open(b.store);
  QueryOptions q;
  q.workload.distribution = Distribution::kPowerLaw;
  q.workload.num_queries = 400;
  q.workload.batch_size = 10;
  q.workload.seed = 3;
  q.repeats = 2;
  q.threads = 1;
  const auto one = cmd_query(*e, q, probe_);
  q.threads = 2;
  const auto two = cmd_query(*e, q, probe_);
  EXPECT_EQ(one.measurement.bytes_processed, two.measurement.bytes_processed);
  EXPECT_EQ(one.phase, "multi_get");
  EXPECT_EQ(two.threads, 2);
  EXPECT_EQ(one.block_kib, 16u);
  EXPECT_EQ(one.measurement.run_count, 2);
}

TEST_F(BenchTest, AbsentKeyIsIntegrityFailure) {
  const auto b = build_options("x");
  cmd_build(corpus_, b, probe_);
  const auto e = Engine::open(b.store);
  QueryOptions q;
  q.repeats = 1;
  q.workload.num_queries = 1;
  try {
    run_queries(*e, {store_key(derive_key("nope.c", "swh:none"), KeyOrder::kPpc)}, q, probe_);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kIntegrity);
  }
}

TEST_F(BenchTest, VerifyDetectsMismatchAndExtra) {
  const auto b = build_options("v");
  cmd_build(corpus_, b, probe_);
  {
    const auto e = Engine::open(b.store);
    const auto keys = e->live_keys();
    e->put(decode(keys[5]), "tampered");
    e->put(derive_key("extra.c", "swh:extra"), "x");
  }
  const auto e = Engine::open(b.store);
  const auto v = cmd_verify(*e, corpus_);
  EXPECT_FALSE(v.ok());
  EXPECT_EQ(v.mismatched, 1u);
  EXPECT_EQ(v.extra, 1u);
  EXPECT_FALSE(v.diffs.empty());
}

TEST_F(BenchTest, IngestResumesAndMatchesBuild) {
  IngestOptions in;
  in.store = build_options("i").store;
  uint64_t seen = 0;
  in.progress = [&](uint64_t n) { seen = n; };
  EXPECT_EQ(cmd_ingest(corpus_, in).records, 600u);
  EXPECT_EQ(seen, 600u);
  EXPECT_EQ(cmd_ingest(corpus_, in).records, 600u);  // idempotent rerun
  const auto e = Engine::open(in.store);
  EXPECT_TRUE(cmd_verify(*e, corpus_).ok());
}

TEST_F(BenchTest, PlanWithoutEnergyLeavesColumnsEmpty) {
  BenchPlan plan;
  plan.configs = {{CodecSpec::zstd(3), 16}, {CodecSpec::snappy(), 4}};
  plan.threads = {1, 2};
  WorkloadSpec w;
  w.distribution = Distribution::kUniformDistinct;
  w.num_queries = 100;
  w.batch_size = 1;
  plan.workloads = {w};
  plan.repeats = 1;
  StoreConfig base = build_options("unused").store;
  std::vector<ReportRow> rows;
  run_plan(plan, corpus_, dir_ / "plan", base, probe_, [&](const ReportRow& r) { rows.push_back(r); });
  ASSERT_EQ(rows.size(), 2u * (1 + 2));
  std::ostringstream csv;
  write_csv(csv, rows);
  std::istringstream in(csv.str());
  for (const auto& r : read_csv(in)) {
    EXPECT_FALSE(r.measurement.energy.has_value());
    EXPECT_FALSE(efficiency_mb_j(r.measurement).has_value());
  }
}

TEST_F(BenchTest, PlanReportsInjectedEnergy) {
  BenchPlan plan;
  plan.configs = {{CodecSpec::zstd(3), 16}};
  plan.threads = {1};
  WorkloadSpec w;
  w.num_queries = 50;
  plan.workloads = {w};
  plan.repeats = 1;
  testing::WrappingProbe probe(2'000'000, 1'000'000);  // 2 J per read pair, wraps early
  std::vector<ReportRow> rows;
  run_plan(plan, corpus_, dir_ / "plan", build_options("unused").store, probe,
           [&](const ReportRow& r) { rows.push_back(r); });
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.measurement.energy.has_value());
    EXPECT_NEAR(*r.measurement.energy, 2.0, 1e-9);
  }
}

TEST(BenchPlan, Validation) {
  BenchPlan p;
  p.configs = default_bench_configs();
  p.threads = {1, 2, 4};
  p.workloads = {WorkloadSpec{}};
  EXPECT_NO_THROW(p.validate());
  p.threads = {2, 1};
  EXPECT_THROW(p.validate(), Error);
  EXPECT_EQ(default_thread_sweep(16), (std::vector<int>{1, 2, 4, 8, 16}));
  EXPECT_EQ(default_bench_configs().size(), 4u);
}

TEST(BenchReport, MergesFilesAndPrintsFrontier) {
  testing::TempDir dir;
  auto make = [](double ratio, double secs) {
    ReportRow r;
    r.phase = "build";
    r.codec = CodecSpec::zstd(3);
    r.block_kib = 64;
    r.threads = 1;
    r.ratio = ratio;
    r.measurement.wall_time = secs;
    r.measurement.bytes_processed = kMiB;
    r.measurement.run_count = 1;
    return r;
  };
  std::ofstream(dir / "a.csv") << [&] {
    std::ostringstream o;
    write_csv(o, {make(.2, 1), make(.3, 2)});
    return o.str();
  }();
  std::ofstream(dir / "b.csv") << [&] {
    std::ostringstream o;
    write_csv(o, {make(.1, 4)});
    return o.str();
  }();
  std::ostringstream csv;
  std::ostringstream table;
  const auto f = cmd_report({dir / "a.csv", dir / "b.csv"}, parse_objectives("ratio:min,mib_per_s:max"), csv,
                            table);
  EXPECT_EQ(f.size(), 2u);
  EXPECT_FALSE(table.str().empty());
  EXPECT_EQ(csv.str().substr(0, 5), "phase");
}

}  // namespace
}  // namespace ppcs
