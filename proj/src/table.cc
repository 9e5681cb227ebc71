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

#include "ppcs/table.h"

#include <algorithm>
#include <cstring>

#include "ppcs/coding.h"
#include "ppcs/error.h"

namespace ppcs {

namespace {

Error format_error(const std::filesystem::path& path, const std::string& what) {
  return Error(ErrorCode::kFormat, path.string() + ": " + what);
}

}  // namespace

// Footer field offsets:
//   0 bloom_offset(8) 8 bloom_length(4) 12 index_offset(8) 20 index_length(4)
//   24 entry_count(8) 32 raw_bytes_total(8) 40 compressed_bytes_total(8)
//   48 target_block_size(4) 52 algo(1) 53 level(1) 54 format_version(2)
//   56 crc32 of bytes [0,56) (4) 60 magic "PPCS"(4)
std::string TableFooter::encode() const {
  std::string out;
  out.reserve(kFooterSize);
  put_fixed64(out, bloom_offset);
  put_fixed32(out, bloom_length);
  put_fixed64(out, index_offset);
  put_fixed32(out, index_length);
  put_fixed64(out, entry_count);
  put_fixed64(out, raw_bytes_total);
  put_fixed64(out, compressed_bytes_total);
  put_fixed32(out, target_block_size);
  out.push_back(static_cast<char>(codec.algorithm()));
  out.push_back(static_cast<char>(codec.level()));
  put_fixed16(out, format_version);
  put_fixed32(out, crc32(out));
  out.append(kTableMagic, 4);
  return out;
}

TableFooter TableFooter::decode(std::string_view data) {
  if (data.size() != kFooterSize) throw Error(ErrorCode::kFormat, "footer size mismatch");
  if (std::memcmp(data.data() + 60, kTableMagic, 4) != 0) {
    throw Error(ErrorCode::kFormat, "bad table magic");
  }
  if (decode_fixed32(data.data() + 56) != crc32(data.substr(0, 56))) {
    throw Error(ErrorCode::kIntegrity, "footer checksum mismatch");
  }
  const char* p = data.data();
  TableFooter f;
  f.bloom_offset = decode_fixed64(p);
  f.bloom_length = decode_fixed32(p + 8);
  f.index_offset = decode_fixed64(p + 12);
  f.index_length = decode_fixed32(p + 20);
  f.entry_count = decode_fixed64(p + 24);
  f.raw_bytes_total = decode_fixed64(p + 32);
  f.compressed_bytes_total = decode_fixed64(p + 40);
  f.target_block_size = decode_fixed32(p + 48);
  f.codec = CodecSpec::make(static_cast<Algorithm>(static_cast<uint8_t>(p[52])),
                            static_cast<uint8_t>(p[53]));
  f.format_version = decode_fixed16(p + 54);
  if (f.format_version != kTableFormatVersion) {
    throw Error(ErrorCode::kFormat, "unsupported table format version " +
                                        std::to_string(f.format_version));
  }
  return f;
}

TableBuilder::TableBuilder(const std::filesystem::path& path, const TableOptions& options)
    : options_(options) {
  if (options.target_block_size < kMinTargetBlockSize) {
    throw Error(ErrorCode::kConfig, "target_block_size must be at least 1 KiB");
  }
  if (options.target_block_size > 0xffffffffu) {
    throw Error(ErrorCode::kConfig, "target_block_size must fit in 32 bits");
  }
  file_ = std::make_unique<WritableFile>(path, /*truncate=*/true);
}

TableBuilder::~TableBuilder() {
  if (!finished_ && file_) abandon();
}

void TableBuilder::add(std::string_view key, std::optional<std::string_view> value) {
  if (finished_) throw Error(ErrorCode::kPrecondition, "add after finish");
  if (has_last_ && key <= std::string_view(last_key_)) {
    throw Error(ErrorCode::kSortViolation,
                key == last_key_ ? "duplicate key" : "keys not strictly increasing");
  }
  if (value && value->size() >= kTombstoneLength) {
    throw Error(ErrorCode::kPrecondition, "value too large");
  }
  if (block_.empty()) block_first_key_.assign(key);
  put_fixed32(block_, static_cast<uint32_t>(key.size()));
  put_fixed32(block_, value ? static_cast<uint32_t>(value->size()) : kTombstoneLength);
  block_.append(key);
  if (value) block_.append(*value);
  last_key_.assign(key);
  has_last_ = true;
  key_hashes_.push_back(bloom_hash(key));
  ++entry_count_;
  if (!value) ++tombstone_count_;
  if (block_.size() >= options_.target_block_size) flush_block();
}

void TableBuilder::flush_block() {
  if (block_.empty()) return;
  std::string payload = compress(block_, options_.codec);
  std::string record;
  record.reserve(kBlockHeaderSize + payload.size() + kBlockTrailerSize);
  record.push_back(static_cast<char>(options_.codec.algorithm()));
  record.push_back(static_cast<char>(options_.codec.level()));
  put_fixed32(record, static_cast<uint32_t>(block_.size()));
  record.append(payload);
  put_fixed32(record, crc32(payload));
  index_.push_back({file_->size(), record.size(), block_first_key_});
  file_->append(record);
  raw_bytes_ += block_.size();
  compressed_bytes_ += record.size();
  block_.clear();
}

uint64_t TableBuilder::estimated_file_size() const { return file_->size() + block_.size(); }

TableFooter TableBuilder::finish() {
  if (finished_) throw Error(ErrorCode::kPrecondition, "finish called twice");
  flush_block();

  TableFooter footer;
  footer.entry_count = entry_count_;
  footer.raw_bytes_total = raw_bytes_;
  footer.compressed_bytes_total = compressed_bytes_;
  footer.target_block_size = static_cast<uint32_t>(options_.target_block_size);
  footer.codec = options_.codec;

  std::string bloom = BloomFilter::build(key_hashes_, options_.bits_per_key).serialize();
  footer.bloom_offset = file_->size();
  footer.bloom_length = static_cast<uint32_t>(bloom.size());
  file_->append(bloom);

  std::string index;
  put_fixed32(index, static_cast<uint32_t>(index_.size()));
  for (const auto& h : index_) {
    put_fixed64(index, h.offset);
    put_fixed64(index, h.length);
    put_fixed32(index, static_cast<uint32_t>(h.first_key.size()));
    index.append(h.first_key);
  }
  put_fixed32(index, static_cast<uint32_t>(last_key_.size()));
  index.append(last_key_);
  footer.index_offset = file_->size();
  footer.index_length = static_cast<uint32_t>(index.size());
  file_->append(index);

  file_->append(footer.encode());
  file_->sync();
  file_->close();
  finished_ = true;
  return footer;
}

void TableBuilder::abandon() {
  auto path = file_->path();
  file_.reset();
  std::error_code ec;
  std::filesystem::remove(path, ec);
  finished_ = true;
}

TableFooter build_table(const std::filesystem::path& path, const std::vector<Entry>& entries,
                        const TableOptions& options) {
  TableBuilder builder(path, options);
  for (const auto& e : entries) {
    if (e.value) {
      builder.add(e.key, std::string_view(*e.value));
    } else {
      builder.add(e.key, std::nullopt);
    }
  }
  return builder.finish();
}

Block::Block(std::string contents) : contents_(std::move(contents)) {
  Reader r(contents_);
  while (!r.empty()) {
    uint32_t klen = 0;
    uint32_t vlen = 0;
    if (!r.read32(klen) || !r.read32(vlen)) throw Error(ErrorCode::kIntegrity, "truncated entry header");
    const size_t key_offset = contents_.size() - r.remaining();
    std::string_view skip;
    const size_t body = static_cast<size_t>(klen) + (vlen == kTombstoneLength ? 0 : vlen);
    if (!r.read_bytes(body, skip)) throw Error(ErrorCode::kIntegrity, "truncated entry body");
    offsets_.push_back({static_cast<uint32_t>(key_offset), klen, vlen});
  }
}

std::string_view Block::key(size_t i) const {
  const auto& s = offsets_[i];
  return std::string_view(contents_).substr(s.key_offset, s.key_length);
}

std::optional<std::string_view> Block::value(size_t i) const {
  const auto& s = offsets_[i];
  if (s.value_length == kTombstoneLength) return std::nullopt;
  return std::string_view(contents_).substr(s.key_offset + s.key_length, s.value_length);
}

size_t Block::lower_bound(std::string_view target) const {
  size_t lo = 0;
  size_t hi = offsets_.size();
  while (lo < hi) {
    size_t mid = lo + (hi - lo) / 2;
    if (key(mid) < target) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::shared_ptr<Table> Table::open(const std::filesystem::path& path, bool use_mmap) {
  std::shared_ptr<Table> t(new Table());
  t->file_ = std::make_unique<RandomAccessFile>(path, use_mmap);
  const uint64_t size = t->file_->size();
  if (size < kFooterSize) throw format_error(path, "file shorter than footer");
  std::string scratch;
  t->footer_ = TableFooter::decode(t->file_->read(size - kFooterSize, kFooterSize, scratch));
  const auto& f = t->footer_;
  if (f.bloom_offset + f.bloom_length > size - kFooterSize ||
      f.index_offset + f.index_length > size - kFooterSize) {
    throw format_error(path, "footer handles out of range");
  }
  t->bloom_ = BloomFilter::deserialize(t->file_->read(f.bloom_offset, f.bloom_length, scratch));

  Reader r(t->file_->read(f.index_offset, f.index_length, scratch));
  uint32_t count = 0;
  if (!r.read32(count)) throw format_error(path, "index truncated");
  t->index_.reserve(count);
  uint64_t compressed = 0;
  for (uint32_t i = 0; i < count; ++i) {
    BlockHandle h;
    uint32_t klen = 0;
    std::string_view key;
    if (!r.read64(h.offset) || !r.read64(h.length) || !r.read32(klen) || !r.read_bytes(klen, key)) {
      throw format_error(path, "index truncated");
    }
    h.first_key.assign(key);
    if (!t->index_.empty()) {
      const auto& prev = t->index_.back();
      if (h.offset <= prev.offset || h.first_key <= prev.first_key) {
        throw format_error(path, "index not strictly increasing");
      }
    }
    if (h.offset + h.length > f.bloom_offset || h.length < kBlockHeaderSize + kBlockTrailerSize) {
      throw format_error(path, "block handle out of range");
    }
    compressed += h.length;
    t->index_.push_back(std::move(h));
  }
  uint32_t klen = 0;
  std::string_view last;
  if (!r.read32(klen) || !r.read_bytes(klen, last) || !r.empty()) {
    throw format_error(path, "index trailer malformed");
  }
  t->largest_key_.assign(last);
  if (compressed != f.compressed_bytes_total) throw format_error(path, "footer totals disagree with index");
  return t;
}

const std::string& Table::smallest_key() const {
  static const std::string kEmpty;
  return index_.empty() ? kEmpty : index_.front().first_key;
}

bool Table::may_contain(std::string_view key) const { return bloom_.may_contain(key); }

std::optional<size_t> Table::find_block(std::string_view key) const {
  auto it = std::upper_bound(index_.begin(), index_.end(), key,
                             [](std::string_view k, const BlockHandle& h) { return k < h.first_key; });
  if (it == index_.begin()) return std::nullopt;
  return static_cast<size_t>(std::distance(index_.begin(), it) - 1);
}

std::shared_ptr<const Block> Table::read_block(size_t index) const {
  const auto& h = index_.at(index);
  std::string scratch;
  std::string_view rec = file_->read(h.offset, h.length, scratch);
  const uint32_t raw_len = decode_fixed32(rec.data() + 2);
  const auto payload = rec.substr(kBlockHeaderSize, rec.size() - kBlockHeaderSize - kBlockTrailerSize);
  const uint32_t stored_crc = decode_fixed32(rec.data() + rec.size() - kBlockTrailerSize);
  if (crc32(payload) != stored_crc) {
    throw Error(ErrorCode::kIntegrity, path().string() + ": block " + std::to_string(index) +
                                           " at offset " + std::to_string(h.offset) +
                                           " fails CRC check");
  }
  CodecSpec codec;
  try {
    codec = CodecSpec::make(static_cast<Algorithm>(static_cast<uint8_t>(rec[0])),
                            static_cast<uint8_t>(rec[1]));
  } catch (const Error&) {
    throw Error(ErrorCode::kIntegrity, path().string() + ": block " + std::to_string(index) +
                                           " has an invalid codec tag");
  }
  counters_.blocks_read.fetch_add(1, std::memory_order_relaxed);
  counters_.bytes_decompressed.fetch_add(raw_len, std::memory_order_relaxed);
  return std::make_shared<const Block>(decompress(payload, codec, raw_len));
}

Lookup Table::get(std::string_view key, BlockMemo* memo) const {
  counters_.gets.fetch_add(1, std::memory_order_relaxed);
  if (index_.empty() || key > std::string_view(largest_key_)) return {};
  if (!bloom_.may_contain(key)) {
    counters_.bloom_negatives.fetch_add(1, std::memory_order_relaxed);
    return {};
  }
  auto bi = find_block(key);
  if (!bi) return {};
  std::shared_ptr<const Block> block;
  if (memo && memo->index == *bi) {
    block = memo->block;
  } else {
    block = read_block(*bi);
    if (memo) *memo = {*bi, block};
  }
  size_t pos = block->lower_bound(key);
  if (pos == block->size() || block->key(pos) != key) return {};
  auto v = block->value(pos);
  if (!v) return {LookupKind::kDeleted, {}};
  return {LookupKind::kFound, std::string(*v)};
}

std::vector<Entry> Table::scan(std::string_view from, std::string_view to) const {
  std::vector<Entry> out;
  if (!to.empty() && to <= from) return out;
  for (TableIterator it(std::shared_ptr<const Table>(std::shared_ptr<const Table>{}, this), from);
       it.valid(); it.next()) {
    if (!to.empty() && it.key() >= to) break;
    Entry e{std::string(it.key()), std::nullopt};
    if (auto v = it.value()) e.value.emplace(*v);
    out.push_back(std::move(e));
  }
  return out;
}

TableIterator::TableIterator(std::shared_ptr<const Table> table, std::string_view from)
    : table_(std::move(table)) {
  if (table_->empty()) return;
  size_t start = 0;
  if (!from.empty()) {
    if (auto bi = table_->find_block(from)) start = *bi;
  }
  load(start);
  if (!from.empty()) {
    pos_ = block_->lower_bound(from);
    if (pos_ == block_->size()) next();
  }
}

void TableIterator::load(size_t block_index) {
  block_index_ = block_index;
  pos_ = 0;
  block_ = block_index < table_->index().size() ? table_->read_block(block_index) : nullptr;
}

void TableIterator::next() {
  if (!block_) return;
  ++pos_;
  while (block_ && pos_ >= block_->size()) load(block_index_ + 1);
}

}  // namespace ppcs
