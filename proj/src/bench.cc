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

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "ppcs/bloom.h"
#include "ppcs/coding.h"
#include "ppcs/error.h"
#include "ppcs/external_sort.h"
#include "ppcs/metrics.h"

namespace ppcs {

namespace fs = std::filesystem;

namespace {

constexpr size_t kMaxDiffs = 20;

std::ifstream open_corpus(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIO, "cannot open corpus " + path.string());
  return in;
}

template <typename F>
void for_each_record(const fs::path& path, F&& f) {
  auto in = open_corpus(path);
  CorpusReader reader(in);
  try {
    while (auto r = reader.next()) f(std::move(*r));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIO) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

bool is_store_file(const std::string& name) {
  return name == "MANIFEST" || name == "LOCK" || name == "sort-runs" ||
         (name.starts_with("tbl-") && name.ends_with(".ppcs")) ||
         (name.starts_with("wal-") && name.ends_with(".log")) || name.ends_with(".tmp");
}

void reset_store_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::exists(dir, ec)) return;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kPrecondition, dir.string() + " is not a directory");
  std::vector<fs::path> doomed;
  bool has_manifest = false;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (!is_store_file(name)) {
      throw Error(ErrorCode::kPrecondition,
                  dir.string() + " holds unrelated file " + name + "; refusing to clear it");
    }
    has_manifest = has_manifest || name == "MANIFEST";
    doomed.push_back(e.path());
  }
  if (!doomed.empty() && !has_manifest) {
    throw Error(ErrorCode::kPrecondition, dir.string() + " is not a store; refusing to clear it");
  }
  for (const auto& p : doomed) fs::remove_all(p);
}

}  // namespace

KeyOrder parse_key_order(std::string_view text) {
  if (text == "ppc") return KeyOrder::kPpc;
  if (text == "random") return KeyOrder::kRandom;
  throw Error(ErrorCode::kConfig, "key order must be ppc or random, got '" + std::string(text) + "'");
}

std::string store_key(const PpcKey& key, KeyOrder order) {
  std::string encoded = encode(key);
  if (order == KeyOrder::kPpc) return encoded;
  std::string out;
  put_fixed64(out, bloom_hash(encoded));
  std::reverse(out.begin(), out.end());  // big-endian, so byte order follows the hash
  return out + encoded;
}

std::string record_key(const CorpusRecord& record, KeyOrder order) {
  return store_key(derive_key(canonical_filename(record.filename_candidates), record.content_id),
                   order);
}

BuildResult cmd_build(const fs::path& corpus, const BuildOptions& options, EnergyProbe& probe) {
  options.store.validate();
  if (!fs::exists(corpus)) throw Error(ErrorCode::kIO, "corpus not found: " + corpus.string());
  const fs::path dir = options.store.data_dir;
  BuildResult result;
  StoreStats stats;

  const Phase phase = [&]() -> uint64_t {
    reset_store_dir(dir);
    fs::create_directories(dir);
    ExternalSorter sorter(dir / "sort-runs", options.sort_memory_bytes);
    uint64_t records = 0;
    uint64_t bytes = 0;
    for_each_record(corpus, [&](CorpusRecord&& r) {
      ++records;
      bytes += r.content.size();
      std::string key = record_key(r, options.key_order);
      sorter.add(std::move(key), std::move(r.content));
    });
    auto engine = Engine::open(options.store);
    std::string previous;
    bool first = true;
    sorter.finish([&](std::string_view key, std::string_view value) {
      if (!first && key == previous) {
        throw Error(ErrorCode::kIntegrity, "duplicate key in corpus: " + to_hex(key));
      }
      engine->put_encoded(key, value);
      previous.assign(key);
      first = false;
    });
    fs::remove_all(dir / "sort-runs");
    engine->flush();
    engine->compact();
    stats = engine->stats();
    engine->close();
    result.records = records;
    result.value_bytes = bytes;
    return bytes;
  };

  ReportRow& row = result.row;
  row.phase = "build";
  row.codec = options.store.codec;
  row.block_kib = options.store.target_block_size / kKiB;
  row.threads = options.store.compaction_threads;
  row.measurement = measure(phase, probe, options.repeats);
  row.ratio = stats.ratio;
  if (result.records == 0) {
    result.warnings.push_back("corpus " + corpus.string() + " is empty; compression ratio undefined");
  }
  return result;
}

IngestResult cmd_ingest(const fs::path& corpus, const IngestOptions& options) {
  auto engine = Engine::open(options.store);
  IngestResult result;
  for_each_record(corpus, [&](CorpusRecord&& r) {
    engine->put_encoded(record_key(r, options.key_order), r.content);
    ++result.records;
    result.value_bytes += r.content.size();
    if (options.progress) options.progress(result.records);
  });
  if (options.flush_at_end) {
    engine->flush();
    engine->compact();
  }
  engine->close();
  return result;
}

ReportRow run_queries(const Engine& engine, const std::vector<std::string>& queries,
                      const QueryOptions& options, EnergyProbe& probe) {
  if (options.threads < 1) throw Error(ErrorCode::kConfig, "threads must be >= 1");
  const size_t batch = options.workload.batch_size;
  const auto batches = make_batches(std::span<const std::string>(queries), batch);

  const Phase phase = [&]() -> uint64_t {
    std::atomic<size_t> next{0};
    std::atomic<uint64_t> bytes{0};
    std::mutex failure_mu;
    std::optional<Error> failure;
    auto worker = [&] {
      uint64_t local = 0;
      try {
        for (size_t i = next.fetch_add(1); i < batches.size(); i = next.fetch_add(1)) {
          const auto& b = batches[i];
          if (b.size() == 1) {
            auto v = engine.get_encoded(b[0]);
            if (!v) throw Error(ErrorCode::kIntegrity, "hit query returned no value for key " + to_hex(b[0]));
            local += v->size();
          } else {
            const auto values = engine.multi_get(b);
            for (size_t k = 0; k < values.size(); ++k) {
              if (!values[k]) {
                throw Error(ErrorCode::kIntegrity, "hit query returned no value for key " + to_hex(b[k]));
              }
              local += values[k]->size();
            }
          }
        }
      } catch (const Error& e) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = e;
        next.store(batches.size());
      }
      bytes.fetch_add(local);
    };
    {
      std::vector<std::jthread> pool;
      pool.reserve(static_cast<size_t>(options.threads));
      for (int t = 0; t < options.threads; ++t) pool.emplace_back(worker);
    }
    if (failure) throw *failure;
    return bytes.load();
  };

  ReportRow row;
  row.phase = batch == 1 ? "get" : "multi_get";
  const auto tables = engine.tables();
  if (!tables.empty()) {
    row.codec = tables.front().table->footer().codec;
    row.block_kib = tables.front().table->footer().target_block_size / kKiB;
  } else {
    row.codec = engine.config().codec;
    row.block_kib = engine.config().target_block_size / kKiB;
  }
  row.threads = options.threads;
  row.distribution = std::string(distribution_name(options.workload.distribution));
  row.batch = batch;
  row.measurement = measure(phase, probe, options.repeats);
  row.ratio = engine.stats().ratio;
  return row;
}

ReportRow cmd_query(const Engine& engine, const QueryOptions& options, EnergyProbe& probe) {
  const auto universe = engine.live_keys();
  options.workload.validate(universe.size());
  const auto queries = generate_workload(options.workload, universe);
  return run_queries(engine, queries, options, probe);
}

VerifyResult cmd_verify(const Engine& engine, const fs::path& corpus, KeyOrder key_order) {
  VerifyResult v;
  std::unordered_set<std::string> seen;
  auto note = [&](std::string msg) {
    if (v.diffs.size() < kMaxDiffs) v.diffs.push_back(std::move(msg));
  };
  for_each_record(corpus, [&](CorpusRecord&& r) {
    ++v.checked;
    std::string key = record_key(r, key_order);
    const auto got = engine.get_encoded(key);
    if (!got) {
      ++v.missing;
      note("missing " + r.content_id);
    } else if (*got != r.content) {
      ++v.mismatched;
      note("mismatch " + r.content_id + ": stored " + std::to_string(got->size()) +
           " bytes, corpus " + std::to_string(r.content.size()) + " bytes");
    } else {
      ++v.matched;
    }
    seen.insert(std::move(key));
  });
  for (const auto& k : engine.live_keys()) {
    if (!seen.contains(k)) {
      ++v.extra;
      note("extra key " + to_hex(k));
    }
  }
  return v;
}

std::vector<ReportRow> cmd_report(const std::vector<fs::path>& csv_paths,
                                  const std::vector<Objective>& objectives, std::ostream& csv_out,
                                  std::ostream& table_out) {
  std::vector<ReportRow> rows;
  for (const auto& p : csv_paths) {
    auto part = read_csv_file(p);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  auto frontier = pareto_frontier(rows, objectives);
  write_csv(csv_out, frontier);
  table_out << frontier.size() << " of " << rows.size() << " rows on the frontier\n";
  print_table(table_out, frontier);
  return frontier;
}

void BenchPlan::validate() const {
  if (configs.empty()) throw Error(ErrorCode::kConfig, "bench plan has no configurations");
  if (threads.empty()) throw Error(ErrorCode::kConfig, "bench plan has no thread counts");
  for (size_t i = 0; i < threads.size(); ++i) {
    if (threads[i] < 1) throw Error(ErrorCode::kConfig, "thread counts must be >= 1");
    if (i > 0 && threads[i] <= threads[i - 1]) {
      throw Error(ErrorCode::kConfig, "thread counts must be strictly increasing");
    }
  }
  if (repeats < 1) throw Error(ErrorCode::kConfig, "repeats must be >= 1");
}

std::vector<BenchConfig> default_bench_configs() {
  return {{CodecSpec::zstd(3), 64}, {CodecSpec::zstd(6), 4}, {CodecSpec::zstd(6), 128},
          {CodecSpec::zstd(9), 128}};
}

std::vector<int> default_thread_sweep(int max_threads) {
  std::vector<int> out;
  for (int p = 1; p <= std::max(1, max_threads); p *= 2) out.push_back(p);
  return out;
}

void run_plan(const BenchPlan& plan, const fs::path& corpus, const fs::path& work_dir,
              const StoreConfig& base, EnergyProbe& probe,
              const std::function<void(const ReportRow&)>& sink) {
  plan.validate();
  for (const auto& c : plan.configs) {
    BuildOptions b;
    b.store = base;
    b.store.codec = c.codec;
    b.store.target_block_size = c.block_kib * kKiB;
    b.store.data_dir = work_dir / (std::string(c.codec.algorithm_name()) + "-" +
                                   std::to_string(c.codec.level()) + "-" +
                                   std::to_string(c.block_kib) + "k");
    b.repeats = plan.repeats;
    auto built = cmd_build(corpus, b, probe);
    for (const auto& w : built.warnings) std::fprintf(stderr, "ppcs: warning: %s\n", w.c_str());
    sink(built.row);
    if (built.records == 0) continue;

    auto engine = Engine::open(b.store);
    const auto universe = engine->live_keys();
    for (const auto& spec : plan.workloads) {
      spec.validate(universe.size());
      const auto queries = generate_workload(spec, universe);
      for (int p : plan.threads) {
        QueryOptions q{spec, p, plan.repeats};
        sink(run_queries(*engine, queries, q, probe));
      }
    }
  }
}

}  // namespace ppcs
