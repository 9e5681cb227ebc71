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

// ppcs: command-line driver for building compressed stores from source-code
// corpora and measuring their space, time and energy trade-offs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ppcs/bench.h"
#include "ppcs/corpus.h"
#include "ppcs/energy.h"
#include "ppcs/engine.h"
#include "ppcs/error.h"
#include "ppcs/ppc_key.h"
#include "ppcs/report.h"
#include "ppcs/synth_corpus.h"
#include "ppcs/workload.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitIO = 3;

struct Globals {
  std::string data_dir = "ppcs-data";
  std::string codec = "zstd:3";
  uint64_t block_kib = 64;
  std::vector<int> threads;
  std::string dist = "uniform";
  uint64_t batch = 1;
  int repeats = 5;
  uint64_t seed = 42;
  std::string csv;
  std::string energy = "auto";
  bool ordered = false;
  uint64_t queries = 10000;
  std::string key_order = "ppc";
  uint64_t write_buffer_mib = 256;
  bool mmap = false;
};

ppcs::StoreConfig store_config(const Globals& g) {
  ppcs::StoreConfig c;
  c.data_dir = g.data_dir;
  c.codec = ppcs::CodecSpec::parse(g.codec);
  c.target_block_size = g.block_kib * ppcs::kKiB;
  c.write_buffer_bytes = g.write_buffer_mib * ppcs::kMiB;
  c.use_mmap_reads = g.mmap;
  if (!g.threads.empty()) c.compaction_threads = g.threads.front();
  c.validate();
  return c;
}

std::unique_ptr<ppcs::EnergyProbe> probe_for(const Globals& g) {
  return ppcs::make_energy_probe(g.energy == "off" ? ppcs::EnergyMode::kOff
                                                   : ppcs::EnergyMode::kAuto);
}

// Appends rows to --csv (header only for a new file) and the per-run samples
// to the sibling .runs.csv.
void emit_rows(const Globals& g, const std::vector<ppcs::ReportRow>& rows) {
  ppcs::print_table(std::cout, rows);
  if (g.csv.empty()) return;
  auto append = [](const fs::path& path, auto&& write) {
    std::error_code ec;
    const bool fresh = !fs::exists(path, ec) || fs::file_size(path, ec) == 0;
    std::ofstream out(path, std::ios::app);
    if (!out) throw ppcs::Error(ppcs::ErrorCode::kIO, "cannot write " + path.string());
    write(out, fresh);
  };
  append(g.csv, [&](std::ostream& out, bool fresh) { ppcs::write_csv(out, rows, fresh); });
  append(g.csv + ".runs.csv", [&](std::ostream& out, bool fresh) {
    std::ostringstream tmp;
    ppcs::write_runs_csv(tmp, rows);
    std::string text = tmp.str();
    if (!fresh) text.erase(0, text.find('\n') + 1);
    out << text;
  });
}

ppcs::WorkloadSpec workload_spec(const Globals& g, const std::string& dist, uint64_t batch) {
  ppcs::WorkloadSpec w;
  w.distribution = ppcs::parse_distribution(dist);
  w.num_queries = g.queries;
  w.batch_size = batch;
  w.seed = g.seed;
  w.ordered = g.ordered;
  return w;
}

int run(int argc, char** argv) {
  CLI::App app{"Compressed key-value store for source code, with a space/time/energy benchmark"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;

  app.add_option("--data-dir", g.data_dir, "Store directory");
  app.add_option("--codec", g.codec, "identity | snappy | zstd:N | deflate:N");
  app.add_option("--block-kib", g.block_kib, "Target data block size in KiB");
  app.add_option("--threads", g.threads,
                 "Query worker counts (comma separated sweep); compaction threads for build")
      ->delimiter(',');
  app.add_option("--dist", g.dist, "Query key distribution")
      ->check(CLI::IsMember({"uniform", "powerlaw"}));
  app.add_option("--batch", g.batch, "Keys per query; 1 = single-get");
  app.add_option("--repeats", g.repeats, "Runs averaged per measurement");
  app.add_option("--seed", g.seed, "Workload seed");
  app.add_option("--csv", g.csv, "Append report rows to this CSV");
  app.add_option("--energy", g.energy, "Energy probe")->check(CLI::IsMember({"auto", "off"}));
  app.add_flag("--ordered", g.ordered, "Issue the sampled keys in key order");
  app.add_option("--queries", g.queries, "Keys sampled per workload (batched by --batch)");
  app.add_option("--key-order", g.key_order, "ppc | random (baseline)");
  app.add_option("--write-buffer-mib", g.write_buffer_mib, "Memtable size before a flush");
  app.add_flag("--mmap", g.mmap, "Read tables through mmap");

  std::string corpus;
  auto* ingest = app.add_subcommand("ingest", "Put corpus records into a store in stream order");
  ingest->add_option("corpus", corpus, "JSONL corpus")->required();

  auto* build = app.add_subcommand("build", "Build a fresh store from a corpus and report it");
  build->add_option("corpus", corpus, "JSONL corpus")->required();

  auto* query = app.add_subcommand("query", "Run a retrieval workload against a store");
  std::string workload_out;
  query->add_option("--save-workload", workload_out, "Write the sampled workload to a file");

  auto* report = app.add_subcommand("report", "Pareto frontier of benchmark CSVs");
  std::vector<std::string> csv_inputs;
  std::string objectives = "ratio:min,mib_per_s:max";
  std::string frontier_out;
  report->add_option("inputs", csv_inputs, "Benchmark CSVs")->required();
  report->add_option("--objectives", objectives, "field:min|max, comma separated");
  report->add_option("--out", frontier_out, "Frontier CSV (default stdout)");

  auto* verify = app.add_subcommand("verify", "Check every corpus value against the store");
  verify->add_option("corpus", corpus, "JSONL corpus")->required();

  auto* derive = app.add_subcommand("derive-key", "Print the store key for a file name");
  std::string name;
  std::string content_id;
  derive->add_option("name", name, "Canonical file name")->required();
  derive->add_option("content_id", content_id, "Content identifier")->required();

  auto* gen = app.add_subcommand("gen-corpus", "Write a synthetic redundant corpus");
  std::string gen_out;
  ppcs::SynthCorpusOptions synth;
  uint64_t gen_mib = 1024;
  gen->add_option("output", gen_out, "Output JSONL path")->required();
  gen->add_option("--files", synth.num_files, "Number of files");
  gen->add_option("--mib", gen_mib, "Approximate total content in MiB");
  gen->add_option("--overlap", synth.overlap, "Fraction of template lines each file keeps");
  gen->add_option("--family-size", synth.files_per_family, "Mean files per family");

  auto* matrix = app.add_subcommand("matrix", "Build each default configuration and sweep queries");
  std::string work_dir = "ppcs-bench";
  std::vector<std::string> dists = {"uniform", "powerlaw"};
  std::vector<uint64_t> batches = {1, 100};
  matrix->add_option("corpus", corpus, "JSONL corpus")->required();
  matrix->add_option("--work-dir", work_dir, "Directory for the built stores");
  matrix->add_option("--dists", dists, "Distributions to sweep")->delimiter(',');
  matrix->add_option("--batches", batches, "Batch sizes to sweep")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*derive) {
      const auto key = ppcs::derive_key(name, content_id);
      std::cout << ppcs::display(key) << '\n' << ppcs::to_hex(ppcs::encode(key)) << '\n';
      return kExitOk;
    }
    if (*gen) {
      synth.seed = g.seed;
      synth.target_bytes = gen_mib * ppcs::kMiB;
      const auto s = ppcs::write_synthetic_corpus(gen_out, synth);
      std::cout << "wrote " << s.files << " files, " << s.content_bytes << " content bytes, "
                << s.families << " families to " << gen_out << '\n';
      return kExitOk;
    }
    if (*ingest) {
      ppcs::IngestOptions o;
      o.store = store_config(g);
      o.key_order = ppcs::parse_key_order(g.key_order);
      const auto r = ppcs::cmd_ingest(corpus, o);
      std::cout << "ingested " << r.records << " records, " << r.value_bytes << " bytes\n";
      return kExitOk;
    }
    if (*build) {
      ppcs::BuildOptions o;
      o.store = store_config(g);
      o.key_order = ppcs::parse_key_order(g.key_order);
      o.repeats = g.repeats;
      auto probe = probe_for(g);
      const auto r = ppcs::cmd_build(corpus, o, *probe);
      for (const auto& w : r.warnings) std::cerr << "ppcs: warning: " << w << '\n';
      std::cout << "built " << r.records << " records, " << r.value_bytes << " bytes\n";
      emit_rows(g, {r.row});
      return kExitOk;
    }
    if (*query) {
      auto engine = ppcs::Engine::open(store_config(g));
      const auto universe = engine->live_keys();
      const auto spec = workload_spec(g, g.dist, g.batch);
      spec.validate(universe.size());
      const auto queries = ppcs::generate_workload(spec, universe);
      if (!workload_out.empty()) ppcs::save_workload(workload_out, spec, universe.size(), queries);
      auto probe = probe_for(g);
      std::vector<ppcs::ReportRow> rows;
      const auto sweep = g.threads.empty() ? std::vector<int>{1} : g.threads;
      for (int p : sweep) {
        rows.push_back(ppcs::run_queries(*engine, queries, {spec, p, g.repeats}, *probe));
      }
      emit_rows(g, rows);
      return kExitOk;
    }
    if (*report) {
      std::vector<fs::path> paths(csv_inputs.begin(), csv_inputs.end());
      const auto obj = ppcs::parse_objectives(objectives);
      if (frontier_out.empty()) {
        ppcs::cmd_report(paths, obj, std::cout, std::cerr);
      } else {
        std::ofstream out(frontier_out);
        if (!out) throw ppcs::Error(ppcs::ErrorCode::kIO, "cannot write " + frontier_out);
        ppcs::cmd_report(paths, obj, out, std::cout);
      }
      return kExitOk;
    }
    if (*verify) {
      auto engine = ppcs::Engine::open(store_config(g));
      const auto v = ppcs::cmd_verify(*engine, corpus, ppcs::parse_key_order(g.key_order));
      for (const auto& d : v.diffs) std::cout << d << '\n';
      std::cout << (v.ok() ? "ok" : "FAILED") << ": " << v.matched << "/" << v.checked
                << " values byte-equal, " << v.missing << " missing, " << v.mismatched
                << " mismatched, " << v.extra << " extra\n";
      return v.ok() ? kExitOk : kExitData;
    }
    if (*matrix) {
      ppcs::BenchPlan plan;
      plan.configs = ppcs::default_bench_configs();
      plan.threads = g.threads.empty()
                         ? ppcs::default_thread_sweep(static_cast<int>(std::thread::hardware_concurrency()))
                         : g.threads;
      plan.repeats = g.repeats;
      for (const auto& d : dists) {
        for (uint64_t b : batches) plan.workloads.push_back(workload_spec(g, d, b));
      }
      auto base = store_config(g);
      base.compaction_threads = ppcs::StoreConfig{}.compaction_threads;
      auto probe = probe_for(g);
      ppcs::run_plan(plan, corpus, work_dir, base, *probe,
                     [&](const ppcs::ReportRow& row) { emit_rows(g, {row}); });
      return kExitOk;
    }
  } catch (const ppcs::Error& e) {
    std::cerr << "ppcs: " << e.what() << '\n';
    switch (e.code()) {
      case ppcs::ErrorCode::kIO:
        return kExitIO;
      case ppcs::ErrorCode::kConfig:
      case ppcs::ErrorCode::kSpec:
      case ppcs::ErrorCode::kInvalidName:
        return kExitUsage;
      default:
        return kExitData;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "ppcs: io: " << e.what() << '\n';
    return kExitIO;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
