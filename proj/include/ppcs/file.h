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
#include <string>
#include <string_view>

namespace ppcs {

// Append-only file. Data is buffered in user space up to `buffer_bytes`;
// a zero buffer writes through to the kernel on every append.
class WritableFile {
 public:
  WritableFile(const std::filesystem::path& path, bool truncate, size_t buffer_bytes = 1 << 20);
  ~WritableFile();
  WritableFile(const WritableFile&) = delete;
  WritableFile& operator=(const WritableFile&) = delete;

  void append(std::string_view data);
  void flush();
  void sync();
  void close();

  // Logical size including buffered bytes.
  uint64_t size() const { return size_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  void write_all(std::string_view data);

  std::filesystem::path path_;
  int fd_ = -1;
  size_t buffer_bytes_;
  std::string buffer_;
  uint64_t size_ = 0;
  uint64_t flushed_ = 0;
};

// Immutable file opened for positional reads, either through pread or a
// read-only memory mapping.
class RandomAccessFile {
 public:
  RandomAccessFile(const std::filesystem::path& path, bool use_mmap);
  ~RandomAccessFile();
  RandomAccessFile(const RandomAccessFile&) = delete;
  RandomAccessFile& operator=(const RandomAccessFile&) = delete;

  // Returns exactly `n` bytes at `offset`; the view points either into the
  // mapping or into `scratch`. Short reads are kFormat errors.
  std::string_view read(uint64_t offset, size_t n, std::string& scratch) const;

  uint64_t size() const { return size_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  uint64_t size_ = 0;
  const char* map_ = nullptr;
};

void sync_directory(const std::filesystem::path& dir);

// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace ppcs
