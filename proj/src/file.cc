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

#include "ppcs/file.h"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <fstream>
#include <sstream>

#include "ppcs/error.h"

namespace ppcs {

WritableFile::WritableFile(const std::filesystem::path& path, bool truncate, size_t buffer_bytes)
    : path_(path), buffer_bytes_(buffer_bytes) {
  int flags = O_WRONLY | O_CREAT | O_CLOEXEC | (truncate ? O_TRUNC : O_APPEND);
  fd_ = ::open(path.c_str(), flags, 0644);
  if (fd_ < 0) throw_io_error("open " + path.string(), errno);
  if (!truncate) {
    struct stat st {};
    if (::fstat(fd_, &st) != 0) throw_io_error("fstat " + path.string(), errno);
    size_ = static_cast<uint64_t>(st.st_size);
    flushed_ = size_;
  }
  buffer_.reserve(buffer_bytes_);
}

WritableFile::~WritableFile() {
  if (fd_ >= 0) {
    try {
      flush();
    } catch (const Error&) {
      // Destructors must not throw; callers wanting errors call close().
    }
    ::close(fd_);
  }
}

void WritableFile::write_all(std::string_view data) {
  size_t done = 0;
  while (done < data.size()) {
    ssize_t n = ::write(fd_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_io_error("write " + path_.string() + " at offset " + std::to_string(flushed_), errno);
    }
    done += static_cast<size_t>(n);
    flushed_ += static_cast<uint64_t>(n);
  }
}

void WritableFile::append(std::string_view data) {
  size_ += data.size();
  if (buffer_.size() + data.size() > buffer_bytes_) {
    flush();
    if (data.size() >= buffer_bytes_) {
      write_all(data);
      return;
    }
  }
  buffer_.append(data);
}

void WritableFile::flush() {
  if (buffer_.empty()) return;
  write_all(buffer_);
  buffer_.clear();
}

void WritableFile::sync() {
  flush();
  if (::fdatasync(fd_) != 0) throw_io_error("fdatasync " + path_.string(), errno);
}

void WritableFile::close() {
  if (fd_ < 0) return;
  flush();
  int fd = fd_;
  fd_ = -1;
  if (::close(fd) != 0) throw_io_error("close " + path_.string(), errno);
}

RandomAccessFile::RandomAccessFile(const std::filesystem::path& path, bool use_mmap)
    : path_(path) {
  fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd_ < 0) throw_io_error("open " + path.string(), errno);
  struct stat st {};
  if (::fstat(fd_, &st) != 0) {
    int err = errno;
    ::close(fd_);
    throw_io_error("fstat " + path.string(), err);
  }
  size_ = static_cast<uint64_t>(st.st_size);
  if (use_mmap && size_ > 0) {
    void* p = ::mmap(nullptr, size_, PROT_READ, MAP_SHARED, fd_, 0);
    if (p == MAP_FAILED) {
      int err = errno;
      ::close(fd_);
      throw_io_error("mmap " + path.string(), err);
    }
    map_ = static_cast<const char*>(p);
  }
}

RandomAccessFile::~RandomAccessFile() {
  if (map_) ::munmap(const_cast<char*>(map_), size_);
  if (fd_ >= 0) ::close(fd_);
}

std::string_view RandomAccessFile::read(uint64_t offset, size_t n, std::string& scratch) const {
  if (offset > size_ || n > size_ - offset) {
    throw Error(ErrorCode::kFormat, path_.string() + ": read of " + std::to_string(n) +
                                        " bytes at " + std::to_string(offset) +
                                        " past end of file");
  }
  if (map_) return std::string_view(map_ + offset, n);
  scratch.resize(n);
  size_t done = 0;
  while (done < n) {
    ssize_t r = ::pread(fd_, scratch.data() + done, n - done, static_cast<off_t>(offset + done));
    if (r < 0) {
      if (errno == EINTR) continue;
      throw_io_error("pread " + path_.string() + " at offset " + std::to_string(offset + done),
                     errno);
    }
    if (r == 0) throw Error(ErrorCode::kFormat, path_.string() + ": unexpected end of file");
    done += static_cast<size_t>(r);
  }
  return scratch;
}

void sync_directory(const std::filesystem::path& dir) {
  int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (fd < 0) throw_io_error("open directory " + dir.string(), errno);
  int rc = ::fsync(fd);
  int err = errno;
  ::close(fd);
  if (rc != 0) throw_io_error("fsync directory " + dir.string(), err);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    WritableFile f(tmp, /*truncate=*/true, 0);
    f.append(contents);
    f.sync();
    f.close();
  }
  if (::rename(tmp.c_str(), path.c_str()) != 0) throw_io_error("rename " + tmp.string(), errno);
  sync_directory(path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io_error("open " + path.string(), errno);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ppcs
