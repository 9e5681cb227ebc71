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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppcs/codec.h"
#include "ppcs/error.h"
#include "ppcs/memtable.h"
#include "ppcs/ppc_key.h"
#include "ppcs/table.h"
#include "ppcs/wal.h"

namespace ppcs {

constexpr uint64_t kKiB = 1024;
constexpr uint64_t kMiB = 1024 * kKiB;
constexpr uint64_t kGiB = 1024 * kMiB;

struct StoreConfig {
  std::filesystem::path data_dir;
  CodecSpec codec = CodecSpec::zstd(3);
  size_t target_block_size = 64 * kKiB;
  uint64_t write_buffer_bytes = 2 * kGiB;
  uint64_t max_wal_bytes = 64 * kGiB;
  int compaction_threads = 6;
  double bits_per_key = 10.0;
  // Upper bound on the bytes of live table files.
  std::optional<uint64_t> capacity_m;
  bool use_mmap_reads = false;
  // fdatasync the WAL after every record (power-loss durability).
  bool sync_wal = false;
  // Compaction output tables roll over at this size.
  uint64_t target_table_bytes = 256 * kMiB;

  void validate() const;
  TableOptions table_options() const { return {target_block_size, codec, bits_per_key}; }
};

struct TableStats {
  std::filesystem::path path;
  int level = 0;
  uint64_t entries = 0;
  uint64_t raw_bytes = 0;
  uint64_t file_bytes = 0;
  uint64_t blocks = 0;
  uint64_t gets = 0;
  uint64_t bloom_negatives = 0;
  uint64_t blocks_read = 0;
  uint64_t bytes_decompressed = 0;
};

struct StoreStats {
  // Table entries (shadowed versions included until compaction) plus
  // memtable entries.
  uint64_t entry_count = 0;
  uint64_t memtable_entries = 0;
  uint64_t raw_bytes = 0;         // decompressed data-block bytes of live tables
  uint64_t compressed_bytes = 0;  // live table file bytes
  std::optional<double> ratio;    // compressed / raw; absent when raw is zero
  uint64_t blocks_read = 0;
  uint64_t bytes_decompressed = 0;
  std::vector<TableStats> tables;
};

// Thrown by multi_get when a lookup fails mid-batch; carries the results
// resolved before the failure.
class MultiGetError : public Error {
 public:
  MultiGetError(const Error& cause, std::vector<std::optional<std::string>> partial)
      : Error(cause.code(), std::string("multi_get aborted: ") + cause.what()),
        partial_(std::move(partial)) {}
  const std::vector<std::optional<std::string>>& partial() const { return partial_; }

 private:
  std::vector<std::optional<std::string>> partial_;
};

// Two-level log-structured store: memtable + WAL, fresh flushes in L0 and
// non-overlapping compacted runs in L1.
//
// One logical writer at a time (put/remove/flush/compact are serialized);
// any number of concurrent readers. Readers take a snapshot of the table
// set and never wait on flushes or compactions.
class Engine {
 public:
  static std::unique_ptr<Engine> open(const StoreConfig& config);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void put(const PpcKey& key, std::string_view value) { put_encoded(encode(key), value); }
  void remove(const PpcKey& key) { remove_encoded(encode(key)); }
  std::optional<std::string> get(const PpcKey& key) const { return get_encoded(encode(key)); }

  // The engine orders keys by raw bytes; these take already-encoded keys.
  void put_encoded(std::string_view key, std::string_view value);
  void remove_encoded(std::string_view key);
  std::optional<std::string> get_encoded(std::string_view key) const;
  std::vector<std::optional<std::string>> multi_get(std::span<const std::string> keys) const;

  void flush();
  void compact();
  StoreStats stats() const;

  // Keys with a live value, in order. Scans every table.
  std::vector<std::string> live_keys() const;

  struct LiveTable {
    int level;
    std::shared_ptr<const Table> table;
  };
  // L0 newest first, then L1 in key order.
  std::vector<LiveTable> tables() const;

  const std::vector<std::string>& recovery_warnings() const { return warnings_; }
  const StoreConfig& config() const { return config_; }

  // Releases file handles without flushing; unflushed writes stay in the WAL.
  void close();

 private:
  struct Version;
  struct TableRef;

  explicit Engine(const StoreConfig& config);
  void recover();
  std::shared_ptr<const Version> current() const;
  void install(std::shared_ptr<const Version> v);
  void write_locked(std::string_view key, std::optional<std::string_view> value);
  void flush_locked();
  void commit_manifest(const Version& v, uint64_t log_number);
  void check_capacity(uint64_t extra_raw) const;
  std::shared_ptr<TableRef> open_table(uint64_t number, int level, uint64_t tombstones) const;
  std::filesystem::path file_path(const std::string& name) const;
  Lookup lookup(const Version& v, std::string_view key, std::vector<BlockMemo>* memos) const;

  StoreConfig config_;
  std::vector<std::string> warnings_;

  mutable std::mutex version_mu_;
  std::shared_ptr<const Version> version_;

  std::mutex write_mu_;
  std::mutex compact_mu_;
  std::atomic<uint64_t> next_sequence_{1};
  uint64_t log_number_ = 0;
  std::vector<uint64_t> live_wals_;
  std::unique_ptr<WalWriter> wal_;
  uint64_t wal_bytes_ = 0;
  int lock_fd_ = -1;
};

}  // namespace ppcs
