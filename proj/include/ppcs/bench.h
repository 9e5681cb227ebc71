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
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ppcs/corpus.h"
#include "ppcs/energy.h"
#include "ppcs/engine.h"
#include "ppcs/ppc_key.h"
#include "ppcs/report.h"
#include "ppcs/workload.h"

namespace ppcs {

// kRandom prefixes each encoded key with 8 hash bytes, scattering similar
// files across the key space. It exists as the baseline for measuring what
// PPC ordering buys.
enum class KeyOrder { kPpc, kRandom };

KeyOrder parse_key_order(std::string_view text);  // "ppc" | "random"
std::string store_key(const PpcKey& key, KeyOrder order);
std::string record_key(const CorpusRecord& record, KeyOrder order);

struct BuildOptions {
  StoreConfig store;
  KeyOrder key_order = KeyOrder::kPpc;
  uint64_t sort_memory_bytes = 256 * kMiB;
  int repeats = 1;
};

struct BuildResult {
  ReportRow row;
  uint64_t records = 0;
  uint64_t value_bytes = 0;
  std::vector<std::string> warnings;
};

// Builds a fresh store from `corpus`: external sort by store key, bulk put,
// flush and compact. Each repeat starts from an empty directory. Refuses to
// clear a non-empty directory that does not hold a store.
BuildResult cmd_build(const std::filesystem::path& corpus, const BuildOptions& options,
                      EnergyProbe& probe);

struct IngestOptions {
  StoreConfig store;
  KeyOrder key_order = KeyOrder::kPpc;
  bool flush_at_end = true;
  // Called after each acknowledged put with the running record count.
  std::function<void(uint64_t)> progress;
};

struct IngestResult {
  uint64_t records = 0;
  uint64_t value_bytes = 0;
};

// Puts records into the store in stream order. Puts are idempotent, so an
// interrupted ingest is resumed by running it again.
IngestResult cmd_ingest(const std::filesystem::path& corpus, const IngestOptions& options);

struct QueryOptions {
  WorkloadSpec workload;
  int threads = 1;
  int repeats = 5;
};

// p workers pull batches from one shared counter until the workload is
// exhausted. Every key must be present; an absent key is kIntegrity.
ReportRow run_queries(const Engine& engine, const std::vector<std::string>& queries,
                      const QueryOptions& options, EnergyProbe& probe);

// Samples the workload from the store's live keys and runs it.
ReportRow cmd_query(const Engine& engine, const QueryOptions& options, EnergyProbe& probe);

struct VerifyResult {
  uint64_t checked = 0;
  uint64_t matched = 0;
  uint64_t missing = 0;
  uint64_t mismatched = 0;
  uint64_t extra = 0;  // live store keys not in the corpus
  std::vector<std::string> diffs;  // first few problems, human-readable

  bool ok() const { return missing == 0 && mismatched == 0 && extra == 0 && checked == matched; }
};

VerifyResult cmd_verify(const Engine& engine, const std::filesystem::path& corpus,
                        KeyOrder key_order = KeyOrder::kPpc);

// Frontier of the union of the given CSVs, written as CSV to `csv_out` and
// as a table to `table_out`.
std::vector<ReportRow> cmd_report(const std::vector<std::filesystem::path>& csv_paths,
                                  const std::vector<Objective>& objectives, std::ostream& csv_out,
                                  std::ostream& table_out);

struct BenchConfig {
  CodecSpec codec;
  uint64_t block_kib = 64;
};

struct BenchPlan {
  std::vector<BenchConfig> configs;
  std::vector<int> threads;
  std::vector<WorkloadSpec> workloads;
  int repeats = 5;

  void validate() const;
};

// zstd-3/64, zstd-6/4, zstd-6/128 and zstd-9/128.
std::vector<BenchConfig> default_bench_configs();
// 1, 2, 4, ... up to `max_threads`.
std::vector<int> default_thread_sweep(int max_threads);

// Builds each configuration under `work_dir` and sweeps threads × workloads
// against it. Rows are passed to `sink` as they are produced.
void run_plan(const BenchPlan& plan, const std::filesystem::path& corpus,
              const std::filesystem::path& work_dir, const StoreConfig& base, EnergyProbe& probe,
              const std::function<void(const ReportRow&)>& sink);

}  // namespace ppcs
