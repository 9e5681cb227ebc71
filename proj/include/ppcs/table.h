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

// Immutable sorted table file.
//
// Layout:
//   [data block]*  each: [1B algo][1B level][4B raw length][payload][4B CRC32(payload)]
//   [bloom section]
//   [index block]  [4B count] count x ([8B offset][8B length][4B klen][first key])
//                  [4B klen][last key]
//   [footer]       64 bytes, see TableFooter, ending in the ASCII magic "PPCS"
//
// A decompressed block is a run of entries [4B klen][4B vlen][key][value];
// vlen == 0xffffffff marks a tombstone (no value bytes follow).
// All integers are little-endian.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ppcs/bloom.h"
#include "ppcs/codec.h"
#include "ppcs/file.h"

namespace ppcs {

constexpr size_t kFooterSize = 64;
constexpr char kTableMagic[4] = {'P', 'P', 'C', 'S'};
constexpr uint16_t kTableFormatVersion = 1;
constexpr uint32_t kTombstoneLength = 0xffffffffu;
constexpr size_t kBlockHeaderSize = 6;
constexpr size_t kBlockTrailerSize = 4;
constexpr size_t kMinTargetBlockSize = 1024;

struct TableOptions {
  size_t target_block_size = 64 * 1024;
  CodecSpec codec = CodecSpec::zstd(3);
  double bits_per_key = 10.0;
};

struct BlockHandle {
  uint64_t offset = 0;
  uint64_t length = 0;  // full on-disk record including header and CRC
  std::string first_key;
};

struct TableFooter {
  uint64_t bloom_offset = 0;
  uint32_t bloom_length = 0;
  uint64_t index_offset = 0;
  uint32_t index_length = 0;
  uint64_t entry_count = 0;
  uint64_t raw_bytes_total = 0;         // decompressed data-block bytes
  uint64_t compressed_bytes_total = 0;  // on-disk data-block bytes
  uint32_t target_block_size = 0;
  CodecSpec codec;
  uint16_t format_version = kTableFormatVersion;

  std::string encode() const;
  static TableFooter decode(std::string_view data);
};

// A table entry; `value` is nullopt for tombstones.
struct Entry {
  std::string key;
  std::optional<std::string> value;

  bool operator==(const Entry&) const = default;
};

// Streams strictly increasing keys into a new table file.
class TableBuilder {
 public:
  TableBuilder(const std::filesystem::path& path, const TableOptions& options);
  ~TableBuilder();
  TableBuilder(const TableBuilder&) = delete;
  TableBuilder& operator=(const TableBuilder&) = delete;

  // Throws kSortViolation if `key` is not greater than the previous key.
  void add(std::string_view key, std::optional<std::string_view> value);
  // Writes bloom, index and footer, then fsyncs. Returns the footer.
  TableFooter finish();
  // Removes the partial file.
  void abandon();

  uint64_t entry_count() const { return entry_count_; }
  uint64_t tombstone_count() const { return tombstone_count_; }
  // Bytes written so far plus the pending block.
  uint64_t estimated_file_size() const;
  std::string_view last_key() const { return last_key_; }

 private:
  void flush_block();

  TableOptions options_;
  std::unique_ptr<WritableFile> file_;
  std::string block_;
  std::string block_first_key_;
  std::string last_key_;
  bool has_last_ = false;
  std::vector<BlockHandle> index_;
  std::vector<uint64_t> key_hashes_;
  uint64_t entry_count_ = 0;
  uint64_t tombstone_count_ = 0;
  uint64_t raw_bytes_ = 0;
  uint64_t compressed_bytes_ = 0;
  bool finished_ = false;
};

TableFooter build_table(const std::filesystem::path& path, const std::vector<Entry>& entries,
                        const TableOptions& options);

// A decompressed data block with its entry offsets.
class Block {
 public:
  explicit Block(std::string contents);

  size_t size() const { return offsets_.size(); }
  std::string_view key(size_t i) const;
  // nullopt for tombstones
  std::optional<std::string_view> value(size_t i) const;
  // Index of the first entry with key >= target, or size().
  size_t lower_bound(std::string_view target) const;
  size_t raw_size() const { return contents_.size(); }

 private:
  struct Slot {
    uint32_t key_offset;
    uint32_t key_length;
    uint32_t value_length;
  };
  std::string contents_;
  std::vector<Slot> offsets_;
};

enum class LookupKind { kAbsent, kFound, kDeleted };

struct Lookup {
  LookupKind kind = LookupKind::kAbsent;
  std::string value;
};

// Last block decompressed by a run of lookups against one table; lets a
// sorted batch reuse a block instead of decoding it again.
struct BlockMemo {
  size_t index = static_cast<size_t>(-1);
  std::shared_ptr<const Block> block;
};

struct TableCounters {
  std::atomic<uint64_t> gets{0};
  std::atomic<uint64_t> bloom_negatives{0};
  std::atomic<uint64_t> blocks_read{0};
  std::atomic<uint64_t> bytes_decompressed{0};
};

// Read side of a table file. Thread-safe; all reads are positional.
class Table {
 public:
  static std::shared_ptr<Table> open(const std::filesystem::path& path, bool use_mmap = false);

  Lookup get(std::string_view key, BlockMemo* memo = nullptr) const;
  // Entries with from <= key < to, in key order; an empty `to` means unbounded.
  std::vector<Entry> scan(std::string_view from, std::string_view to) const;
  std::vector<Entry> scan_all() const { return scan({}, {}); }

  bool may_contain(std::string_view key) const;
  // Index of the block that could hold `key`, if any.
  std::optional<size_t> find_block(std::string_view key) const;
  std::shared_ptr<const Block> read_block(size_t index) const;

  const TableFooter& footer() const { return footer_; }
  const std::vector<BlockHandle>& index() const { return index_; }
  const BloomFilter& bloom() const { return bloom_; }
  const std::string& smallest_key() const;
  const std::string& largest_key() const { return largest_key_; }
  bool empty() const { return index_.empty(); }
  uint64_t file_size() const { return file_->size(); }
  const std::filesystem::path& path() const { return file_->path(); }
  TableCounters& counters() const { return counters_; }

 private:
  Table() = default;

  std::unique_ptr<RandomAccessFile> file_;
  TableFooter footer_;
  BloomFilter bloom_;
  std::vector<BlockHandle> index_;
  std::string largest_key_;
  mutable TableCounters counters_;
};

// Sequential cursor over every entry of a table, one block resident at a time.
class TableIterator {
 public:
  explicit TableIterator(std::shared_ptr<const Table> table, std::string_view from = {});

  bool valid() const { return block_ != nullptr && pos_ < block_->size(); }
  std::string_view key() const { return block_->key(pos_); }
  std::optional<std::string_view> value() const { return block_->value(pos_); }
  void next();

 private:
  void load(size_t block_index);

  std::shared_ptr<const Table> table_;
  std::shared_ptr<const Block> block_;
  size_t block_index_ = 0;
  size_t pos_ = 0;
};

}  // namespace ppcs
