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

#include "ppcs/engine.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <exception>
#include <thread>

#include "ppcs/manifest.h"
#include "ppcs/merge.h"

namespace ppcs {

namespace fs = std::filesystem;

struct Engine::TableRef {
  uint64_t number = 0;
  uint64_t tombstones = 0;
  std::shared_ptr<Table> table;
};

struct Engine::Version {
  std::shared_ptr<Memtable> mem;
  std::vector<std::shared_ptr<TableRef>> l0;  // newest first
  std::vector<std::shared_ptr<TableRef>> l1;  // sorted, disjoint
  uint64_t file_bytes = 0;
  uint64_t raw_bytes = 0;

  void recount() {
    file_bytes = 0;
    raw_bytes = 0;
    for (const auto* level : {&l0, &l1}) {
      for (const auto& t : *level) {
        file_bytes += t->table->file_size();
        raw_bytes += t->table->footer().raw_bytes_total;
      }
    }
  }
};

namespace {

constexpr const char* kManifestName = "MANIFEST";
constexpr const char* kLockName = "LOCK";

// Parses "<prefix>NNN<suffix>" file names.
std::optional<uint64_t> parse_number(const std::string& name, std::string_view prefix,
                                     std::string_view suffix) {
  if (name.size() <= prefix.size() + suffix.size() || name.compare(0, prefix.size(), prefix) != 0 ||
      name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) {
    return std::nullopt;
  }
  const auto digits = name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) return std::nullopt;
  return std::stoull(digits);
}

bool overlaps(const Table& a, const Table& b) {
  return !(a.largest_key() < b.smallest_key() || b.largest_key() < a.smallest_key());
}


}  // namespace

void StoreConfig::validate() const {
  if (data_dir.empty()) throw Error(ErrorCode::kConfig, "data_dir is required");
  if (write_buffer_bytes < kMiB) throw Error(ErrorCode::kConfig, "write_buffer_bytes must be >= 1 MiB");
  if (max_wal_bytes == 0) throw Error(ErrorCode::kConfig, "max_wal_bytes must be positive");
  if (compaction_threads < 1) throw Error(ErrorCode::kConfig, "compaction_threads must be >= 1");
  if (!(bits_per_key > 0)) throw Error(ErrorCode::kConfig, "bits_per_key must be positive");
  if (target_block_size < kMinTargetBlockSize) {
    throw Error(ErrorCode::kConfig, "target_block_size must be >= 1 KiB");
  }
  if (target_table_bytes == 0) throw Error(ErrorCode::kConfig, "target_table_bytes must be positive");
  if (capacity_m && *capacity_m < write_buffer_bytes) {
    throw Error(ErrorCode::kConfig, "capacity_m must be >= write_buffer_bytes");
  }
}

Engine::Engine(const StoreConfig& config) : config_(config) {}

std::unique_ptr<Engine> Engine::open(const StoreConfig& config) {
  config.validate();
  std::error_code ec;
  fs::create_directories(config.data_dir, ec);
  if (ec) throw Error(ErrorCode::kIO, "create " + config.data_dir.string() + ": " + ec.message());

  std::unique_ptr<Engine> engine(new Engine(config));
  const auto lock_path = engine->file_path(kLockName);
  engine->lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (engine->lock_fd_ < 0) throw_io_error("open " + lock_path.string(), errno);
  if (::flock(engine->lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    throw Error(ErrorCode::kIO, config.data_dir.string() + " is in use by another engine");
  }
  engine->recover();
  return engine;
}

Engine::~Engine() {
  try {
    close();
  } catch (const std::exception&) {
  }
}

void Engine::close() {
  std::lock_guard lock(write_mu_);
  if (wal_) {
    wal_->close();
    wal_.reset();
  }
  if (lock_fd_ >= 0) {
    ::close(lock_fd_);
    lock_fd_ = -1;
  }
}

fs::path Engine::file_path(const std::string& name) const { return config_.data_dir / name; }

std::shared_ptr<Engine::TableRef> Engine::open_table(uint64_t number, int level,
                                                     uint64_t tombstones) const {
  (void)level;
  auto ref = std::make_shared<TableRef>();
  ref->number = number;
  ref->tombstones = tombstones;
  ref->table = Table::open(file_path(table_file_name(number)), config_.use_mmap_reads);
  return ref;
}

void Engine::recover() {
  Manifest manifest;
  const auto manifest_path = file_path(kManifestName);
  const bool have_manifest = fs::exists(manifest_path);
  if (have_manifest) {
    std::string text;
    try {
      text = read_file(manifest_path);
    } catch (const Error& e) {
      throw Error(ErrorCode::kRecovery, e.what());
    }
    manifest = Manifest::parse(text);
  }

  auto v = std::make_shared<Version>();
  v->mem = std::make_shared<Memtable>();
  for (const auto& t : manifest.tables) {
    std::shared_ptr<TableRef> ref;
    try {
      ref = open_table(t.number, t.level, t.tombstones);
    } catch (const Error& e) {
      throw Error(ErrorCode::kRecovery, std::string("live table unreadable: ") + e.what());
    }
    (t.level == 0 ? v->l0 : v->l1).push_back(std::move(ref));
  }
  for (size_t i = 1; i < v->l1.size(); ++i) {
    if (!(v->l1[i - 1]->table->largest_key() < v->l1[i]->table->smallest_key())) {
      throw Error(ErrorCode::kRecovery, "L1 tables overlap or are out of order");
    }
  }

  uint64_t max_number = 0;
  std::vector<uint64_t> wals;
  for (const auto& entry : fs::directory_iterator(config_.data_dir)) {
    const auto name = entry.path().filename().string();
    if (auto n = parse_number(name, "tbl-", ".ppcs")) {
      max_number = std::max(max_number, *n);
      const bool live = std::any_of(manifest.tables.begin(), manifest.tables.end(),
                                    [&](const ManifestTable& t) { return t.number == *n; });
      if (!live) fs::remove(entry.path());
    } else if (auto w = parse_number(name, "wal-", ".log")) {
      max_number = std::max(max_number, *w);
      if (*w < manifest.log_number) {
        fs::remove(entry.path());
      } else {
        wals.push_back(*w);
      }
    } else if (name.size() > 4 && name.ends_with(".tmp")) {
      fs::remove(entry.path());
    }
  }
  std::sort(wals.begin(), wals.end());
  next_sequence_ = std::max(manifest.next_sequence, max_number + 1);

  for (uint64_t w : wals) {
    const auto path = file_path(wal_file_name(w));
    auto result = replay_wal(path, [&](WalOp op, std::string_view key,
                                       std::optional<std::string_view> value) {
      if (op == WalOp::kPut) {
        v->mem->put(std::string(key), std::string(*value));
      } else {
        v->mem->put(std::string(key), std::nullopt);
      }
    });
    if (result.truncated) {
      warnings_.push_back(path.string() + ": torn tail truncated after " +
                          std::to_string(result.records) + " records (" +
                          std::to_string(result.valid_bytes) + " bytes)");
      std::fprintf(stderr, "ppcs: warning: %s\n", warnings_.back().c_str());
    }
    wal_bytes_ += result.valid_bytes;
  }

  if (wals.empty()) {
    wals.push_back(next_sequence_++);
  }
  live_wals_ = wals;
  log_number_ = wals.front();
  wal_ = std::make_unique<WalWriter>(file_path(wal_file_name(wals.back())), config_.sync_wal);
  v->recount();
  commit_manifest(*v, log_number_);
  install(std::move(v));
}

std::shared_ptr<const Engine::Version> Engine::current() const {
  std::lock_guard lock(version_mu_);
  return version_;
}

void Engine::install(std::shared_ptr<const Version> v) {
  std::lock_guard lock(version_mu_);
  version_ = std::move(v);
}

void Engine::commit_manifest(const Version& v, uint64_t log_number) {
  Manifest m;
  m.next_sequence = next_sequence_.load();
  m.log_number = log_number;
  for (const auto& t : v.l0) m.tables.push_back({0, t->number, t->tombstones});
  for (const auto& t : v.l1) m.tables.push_back({1, t->number, t->tombstones});
  write_file_atomic(file_path(kManifestName), m.serialize());
}

void Engine::check_capacity(uint64_t extra_raw) const {
  if (!config_.capacity_m) return;
  auto v = current();
  const double ratio = v->raw_bytes > 0
                           ? static_cast<double>(v->file_bytes) / static_cast<double>(v->raw_bytes)
                           : 1.0;
  const double projected =
      static_cast<double>(v->file_bytes) +
      static_cast<double>(v->mem->raw_size() + extra_raw) * ratio;
  if (projected > static_cast<double>(*config_.capacity_m)) {
    throw Error(ErrorCode::kCapacity,
                "projected compressed size " + std::to_string(static_cast<uint64_t>(projected)) +
                    " exceeds capacity " + std::to_string(*config_.capacity_m));
  }
}

void Engine::put_encoded(std::string_view key, std::string_view value) {
  if (key.empty()) throw Error(ErrorCode::kPrecondition, "empty key");
  std::lock_guard lock(write_mu_);
  if (!wal_) throw Error(ErrorCode::kPrecondition, "engine is closed");
  check_capacity(key.size() + value.size());
  write_locked(key, value);
}

void Engine::remove_encoded(std::string_view key) {
  if (key.empty()) throw Error(ErrorCode::kPrecondition, "empty key");
  std::lock_guard lock(write_mu_);
  if (!wal_) throw Error(ErrorCode::kPrecondition, "engine is closed");
  check_capacity(key.size());
  write_locked(key, std::nullopt);
}

void Engine::write_locked(std::string_view key, std::optional<std::string_view> value) {
  if (value) {
    wal_->append(WalOp::kPut, key, *value);
  } else {
    wal_->append(WalOp::kDelete, key, {});
  }
  wal_bytes_ = wal_->size();
  for (size_t i = 0; i + 1 < live_wals_.size(); ++i) {
    // Older replayed segments still count towards the WAL budget.
    std::error_code ec;
    wal_bytes_ += fs::file_size(file_path(wal_file_name(live_wals_[i])), ec);
  }
  auto v = current();
  v->mem->put(std::string(key), value ? std::optional<std::string>(std::string(*value)) : std::nullopt);
  if (v->mem->raw_size() >= config_.write_buffer_bytes || wal_bytes_ >= config_.max_wal_bytes) {
    try {
      flush_locked();
    } catch (const Error& e) {
      // The write is already durable in the WAL; the flush waits for room.
      if (e.code() != ErrorCode::kCapacity) throw;
    }
  }
}

void Engine::flush() {
  std::lock_guard lock(write_mu_);
  if (!wal_) throw Error(ErrorCode::kPrecondition, "engine is closed");
  flush_locked();
}

void Engine::flush_locked() {
  auto v = current();
  if (v->mem->empty()) return;

  const uint64_t number = next_sequence_++;
  const auto path = file_path(table_file_name(number));
  TableBuilder builder(path, config_.table_options());
  v->mem->for_each([&](const std::string& k, const std::optional<std::string>& val) {
    if (val) {
      builder.add(k, std::string_view(*val));
    } else {
      builder.add(k, std::nullopt);
    }
  });
  const uint64_t tombstones = builder.tombstone_count();
  builder.finish();

  auto ref = open_table(number, 0, tombstones);
  if (config_.capacity_m && v->file_bytes + ref->table->file_size() > *config_.capacity_m) {
    ref.reset();
    fs::remove(path);
    throw Error(ErrorCode::kCapacity, "flush would exceed capacity " +
                                          std::to_string(*config_.capacity_m));
  }

  const uint64_t wal_number = next_sequence_++;
  auto wal = std::make_unique<WalWriter>(file_path(wal_file_name(wal_number)), config_.sync_wal);

  auto next = std::make_shared<Version>();
  next->mem = std::make_shared<Memtable>();
  next->l0.push_back(ref);
  next->l0.insert(next->l0.end(), v->l0.begin(), v->l0.end());
  next->l1 = v->l1;
  next->recount();
  try {
    commit_manifest(*next, wal_number);
  } catch (...) {
    wal.reset();
    std::error_code ec;
    fs::remove(file_path(wal_file_name(wal_number)), ec);
    fs::remove(path, ec);
    throw;
  }
  install(next);

  wal_->close();
  wal_ = std::move(wal);
  for (uint64_t old : live_wals_) {
    std::error_code ec;
    fs::remove(file_path(wal_file_name(old)), ec);
  }
  live_wals_ = {wal_number};
  log_number_ = wal_number;
  wal_bytes_ = 0;
}

void Engine::compact() {
  std::lock_guard compact_lock(compact_mu_);
  auto snapshot = current();
  if (snapshot->l0.empty()) return;

  // L0 tables that overlap nothing else move to L1 untouched.
  std::vector<std::shared_ptr<TableRef>> moved;
  std::vector<std::shared_ptr<TableRef>> merged_l0;
  for (const auto& t : snapshot->l0) {
    bool alone = t->tombstones == 0 && !t->table->empty();
    for (const auto& other : snapshot->l0) {
      if (other != t && !other->table->empty() && overlaps(*t->table, *other->table)) alone = false;
    }
    for (const auto& other : snapshot->l1) {
      if (overlaps(*t->table, *other->table)) alone = false;
    }
    (alone ? moved : merged_l0).push_back(t);
  }

  std::vector<std::shared_ptr<TableRef>> merged_l1;
  for (const auto& l1 : snapshot->l1) {
    bool hit = std::any_of(merged_l0.begin(), merged_l0.end(), [&](const auto& t) {
      return !t->table->empty() && overlaps(*t->table, *l1->table);
    });
    if (hit) merged_l1.push_back(l1);
  }

  std::vector<std::shared_ptr<const Table>> inputs;  // newest first
  for (const auto& t : merged_l0) inputs.push_back(t->table);
  for (const auto& t : merged_l1) inputs.push_back(t->table);

  // Split the key space at block boundaries so workers merge disjoint ranges.
  std::vector<std::string> firsts;
  for (const auto& t : inputs) {
    for (const auto& h : t->index()) firsts.push_back(h.first_key);
  }
  std::sort(firsts.begin(), firsts.end());
  firsts.erase(std::unique(firsts.begin(), firsts.end()), firsts.end());
  const size_t workers =
      std::max<size_t>(1, std::min<size_t>(static_cast<size_t>(config_.compaction_threads), firsts.size()));
  std::vector<std::string> bounds;  // workers + 1 entries; "" = unbounded
  bounds.emplace_back();
  for (size_t i = 1; i < workers; ++i) bounds.push_back(firsts[i * firsts.size() / workers]);
  bounds.emplace_back();
  bounds.erase(std::unique(bounds.begin() + 1, bounds.end() - 1), bounds.end() - 1);

  struct Output {
    uint64_t number;
  };
  const size_t ranges = bounds.size() - 1;
  std::vector<std::vector<Output>> outputs(ranges);
  std::vector<std::exception_ptr> failures(ranges);
  auto run_range = [&](size_t r) {
    try {
      const std::string& lo = bounds[r];
      const std::string& hi = bounds[r + 1];
      std::unique_ptr<TableBuilder> builder;
      uint64_t number = 0;
      auto finish = [&] {
        if (!builder) return;
        if (builder->entry_count() == 0) {
          builder->abandon();
        } else {
          builder->finish();
          outputs[r].push_back({number});
        }
        builder.reset();
      };
      for (MergingIterator it(inputs, lo); it.valid(); it.next()) {
        if (!hi.empty() && it.key() >= hi) break;
        auto value = it.value();
        // L1 is the bottom level: a tombstone has nothing left to shadow.
        if (!value) continue;
        if (!builder) {
          number = next_sequence_++;
          builder = std::make_unique<TableBuilder>(file_path(table_file_name(number)),
                                                   config_.table_options());
        }
        builder->add(it.key(), *value);
        if (builder->estimated_file_size() >= config_.target_table_bytes) finish();
      }
      finish();
    } catch (...) {
      failures[r] = std::current_exception();
    }
  };
  if (ranges == 1 || inputs.empty()) {
    if (!inputs.empty()) run_range(0);
  } else {
    std::vector<std::jthread> pool;
    for (size_t r = 0; r < ranges; ++r) pool.emplace_back(run_range, r);
  }

  auto discard_outputs = [&] {
    for (const auto& outs : outputs) {
      for (const auto& o : outs) {
        std::error_code ec;
        fs::remove(file_path(table_file_name(o.number)), ec);
      }
    }
  };
  for (const auto& f : failures) {
    if (f) {
      discard_outputs();
      std::rethrow_exception(f);
    }
  }

  std::vector<std::shared_ptr<TableRef>> new_tables;
  try {
    for (const auto& outs : outputs) {
      for (const auto& o : outs) new_tables.push_back(open_table(o.number, 1, 0));
    }
  } catch (...) {
    discard_outputs();
    throw;
  }

  std::lock_guard write_lock(write_mu_);
  auto cur = current();
  auto contains = [](const std::vector<std::shared_ptr<TableRef>>& set, const std::shared_ptr<TableRef>& t) {
    return std::find(set.begin(), set.end(), t) != set.end();
  };
  auto next = std::make_shared<Version>();
  next->mem = cur->mem;
  for (const auto& t : cur->l0) {
    if (!contains(moved, t) && !contains(merged_l0, t)) next->l0.push_back(t);
  }
  for (const auto& t : cur->l1) {
    if (!contains(merged_l1, t)) next->l1.push_back(t);
  }
  next->l1.insert(next->l1.end(), moved.begin(), moved.end());
  next->l1.insert(next->l1.end(), new_tables.begin(), new_tables.end());
  std::sort(next->l1.begin(), next->l1.end(), [](const auto& a, const auto& b) {
    return a->table->smallest_key() < b->table->smallest_key();
  });
  next->recount();
  try {
    commit_manifest(*next, log_number_);
  } catch (...) {
    discard_outputs();
    throw;
  }
  install(next);
  for (const auto* set : {&merged_l0, &merged_l1}) {
    for (const auto& t : *set) {
      std::error_code ec;
      fs::remove(file_path(table_file_name(t->number)), ec);
    }
  }
}

Lookup Engine::lookup(const Version& v, std::string_view key, std::vector<BlockMemo>* memos) const {
  Lookup r = v.mem->get(key);
  if (r.kind != LookupKind::kAbsent) return r;
  size_t slot = 0;
  for (const auto& t : v.l0) {
    r = t->table->get(key, memos ? &(*memos)[slot] : nullptr);
    if (r.kind != LookupKind::kAbsent) return r;
    ++slot;
  }
  auto it = std::lower_bound(v.l1.begin(), v.l1.end(), key, [](const auto& t, std::string_view k) {
    return std::string_view(t->table->largest_key()) < k;
  });
  if (it == v.l1.end() || key < std::string_view((*it)->table->smallest_key())) return {};
  slot += static_cast<size_t>(it - v.l1.begin());
  return (*it)->table->get(key, memos ? &(*memos)[slot] : nullptr);
}

std::optional<std::string> Engine::get_encoded(std::string_view key) const {
  auto v = current();
  Lookup r = lookup(*v, key, nullptr);
  if (r.kind != LookupKind::kFound) return std::nullopt;
  return std::move(r.value);
}

std::vector<std::optional<std::string>> Engine::multi_get(std::span<const std::string> keys) const {
  std::vector<std::optional<std::string>> results(keys.size());
  if (keys.empty()) return results;
  auto v = current();
  std::vector<size_t> order(keys.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return keys[a] < keys[b]; });
  std::vector<BlockMemo> memos(v->l0.size() + v->l1.size());
  try {
    size_t prev = order.size();
    for (size_t i : order) {
      if (prev != order.size() && keys[prev] == keys[i]) {
        results[i] = results[prev];
      } else {
        Lookup r = lookup(*v, keys[i], &memos);
        if (r.kind == LookupKind::kFound) results[i] = std::move(r.value);
      }
      prev = i;
    }
  } catch (const Error& e) {
    throw MultiGetError(e, std::move(results));
  }
  return results;
}

StoreStats Engine::stats() const {
  auto v = current();
  StoreStats s;
  s.memtable_entries = v->mem->size();
  s.entry_count = s.memtable_entries;
  auto add = [&](const std::shared_ptr<TableRef>& t, int level) {
    const auto& table = *t->table;
    TableStats ts;
    ts.path = table.path();
    ts.level = level;
    ts.entries = table.footer().entry_count;
    ts.raw_bytes = table.footer().raw_bytes_total;
    ts.file_bytes = table.file_size();
    ts.blocks = table.index().size();
    ts.gets = table.counters().gets.load();
    ts.bloom_negatives = table.counters().bloom_negatives.load();
    ts.blocks_read = table.counters().blocks_read.load();
    ts.bytes_decompressed = table.counters().bytes_decompressed.load();
    s.entry_count += ts.entries;
    s.raw_bytes += ts.raw_bytes;
    s.compressed_bytes += ts.file_bytes;
    s.blocks_read += ts.blocks_read;
    s.bytes_decompressed += ts.bytes_decompressed;
    s.tables.push_back(std::move(ts));
  };
  for (const auto& t : v->l0) add(t, 0);
  for (const auto& t : v->l1) add(t, 1);
  if (s.raw_bytes > 0) s.ratio = compression_ratio(s.compressed_bytes, s.raw_bytes);
  return s;
}

std::vector<Engine::LiveTable> Engine::tables() const {
  auto v = current();
  std::vector<LiveTable> out;
  for (const auto& t : v->l0) out.push_back({0, t->table});
  for (const auto& t : v->l1) out.push_back({1, t->table});
  return out;
}

std::vector<std::string> Engine::live_keys() const {
  auto v = current();
  std::vector<std::shared_ptr<const Table>> inputs;
  for (const auto& t : v->l0) inputs.push_back(t->table);
  for (const auto& t : v->l1) inputs.push_back(t->table);
  const auto mem = v->mem->entries();

  std::vector<std::string> out;
  MergingIterator it(inputs);
  auto m = mem.begin();
  while (it.valid() || m != mem.end()) {
    if (m != mem.end() && (!it.valid() || std::string_view(m->key) <= it.key())) {
      if (it.valid() && std::string_view(m->key) == it.key()) it.next();
      if (m->value) out.push_back(m->key);
      ++m;
    } else {
      if (it.value()) out.emplace_back(it.key());
      it.next();
    }
  }
  return out;
}

}  // namespace ppcs
