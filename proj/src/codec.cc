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

#include "ppcs/codec.h"

#include <charconv>

#include <snappy-c.h>
#include <zlib.h>
#include <zstd.h>

#include "ppcs/error.h"

namespace ppcs {

namespace {

constexpr int kZstdMinLevel = 1;
constexpr int kZstdMaxLevel = 22;
constexpr int kDeflateMinLevel = 1;
constexpr int kDeflateMaxLevel = 9;

Error integrity(const std::string& what) { return Error(ErrorCode::kIntegrity, what); }

// One compression context per thread; contexts are reused across calls.
struct ZstdContexts {
  ZSTD_CCtx* cctx = ZSTD_createCCtx();
  ZSTD_DCtx* dctx = ZSTD_createDCtx();
  ~ZstdContexts() {
    ZSTD_freeCCtx(cctx);
    ZSTD_freeDCtx(dctx);
  }
};

ZstdContexts& zstd_contexts() {
  thread_local ZstdContexts ctx;
  return ctx;
}

std::string zstd_compress(std::string_view raw, int level) {
  ZSTD_CCtx* cctx = zstd_contexts().cctx;
  ZSTD_CCtx_reset(cctx, ZSTD_reset_session_and_parameters);
  ZSTD_CCtx_setParameter(cctx, ZSTD_c_compressionLevel, level);
  // Frames carry a content checksum so corruption is caught by the codec too.
  ZSTD_CCtx_setParameter(cctx, ZSTD_c_checksumFlag, 1);
  std::string out(ZSTD_compressBound(raw.size()), '\0');
  size_t n = ZSTD_compress2(cctx, out.data(), out.size(), raw.data(), raw.size());
  if (ZSTD_isError(n)) throw Error(ErrorCode::kConfig, ZSTD_getErrorName(n));
  out.resize(n);
  return out;
}

std::string zstd_decompress(std::string_view in, size_t raw_size) {
  std::string out(raw_size, '\0');
  size_t n = ZSTD_decompressDCtx(zstd_contexts().dctx, out.data(), out.size(), in.data(),
                                 in.size());
  if (ZSTD_isError(n)) throw integrity(std::string("zstd: ") + ZSTD_getErrorName(n));
  if (n != raw_size) throw integrity("zstd: decompressed size mismatch");
  return out;
}

std::string deflate_compress(std::string_view raw, int level) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::string out(bound, '\0');
  int rc = compress2(reinterpret_cast<Bytef*>(out.data()), &bound,
                     reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                     level);
  if (rc != Z_OK) throw Error(ErrorCode::kConfig, "zlib compress2 failed");
  out.resize(bound);
  return out;
}

std::string deflate_decompress(std::string_view in, size_t raw_size) {
  std::string out(raw_size, '\0');
  uLongf len = static_cast<uLongf>(raw_size);
  // zlib rejects a null destination even for empty output.
  char dummy = 0;
  Bytef* dst = raw_size ? reinterpret_cast<Bytef*>(out.data()) : reinterpret_cast<Bytef*>(&dummy);
  if (raw_size == 0) len = 1;
  int rc = uncompress(dst, &len, reinterpret_cast<const Bytef*>(in.data()),
                      static_cast<uLong>(in.size()));
  if (rc != Z_OK) throw integrity("zlib: corrupted stream");
  if ((raw_size == 0 && len != 0) || (raw_size != 0 && len != raw_size)) {
    throw integrity("zlib: decompressed size mismatch");
  }
  return out;
}

std::string snappy_compress_bytes(std::string_view raw) {
  size_t len = snappy_max_compressed_length(raw.size());
  std::string out(len, '\0');
  if (snappy_compress(raw.data(), raw.size(), out.data(), &len) != SNAPPY_OK) {
    throw Error(ErrorCode::kConfig, "snappy compress failed");
  }
  out.resize(len);
  return out;
}

std::string snappy_decompress_bytes(std::string_view in, size_t raw_size) {
  size_t len = 0;
  if (snappy_uncompressed_length(in.data(), in.size(), &len) != SNAPPY_OK || len != raw_size) {
    throw integrity("snappy: bad length header");
  }
  std::string out(raw_size, '\0');
  char dummy = 0;
  char* dst = raw_size ? out.data() : &dummy;
  if (snappy_uncompress(in.data(), in.size(), dst, &len) != SNAPPY_OK || len != raw_size) {
    throw integrity("snappy: corrupted stream");
  }
  return out;
}

}  // namespace

CodecSpec CodecSpec::zstd(int level) { return make(Algorithm::kZstd, level); }

CodecSpec CodecSpec::deflate(int level) { return make(Algorithm::kDeflate, level); }

CodecSpec CodecSpec::make(Algorithm algorithm, int level) {
  switch (algorithm) {
    case Algorithm::kIdentity:
    case Algorithm::kSnappy:
      if (level != 0) throw Error(ErrorCode::kConfig, "identity and snappy take no level");
      return CodecSpec(algorithm, 0);
    case Algorithm::kZstd:
      if (level < kZstdMinLevel || level > kZstdMaxLevel) {
        throw Error(ErrorCode::kConfig, "zstd level must be in 1..22, got " + std::to_string(level));
      }
      return CodecSpec(algorithm, level);
    case Algorithm::kDeflate:
      if (level < kDeflateMinLevel || level > kDeflateMaxLevel) {
        throw Error(ErrorCode::kConfig,
                    "deflate level must be in 1..9, got " + std::to_string(level));
      }
      return CodecSpec(algorithm, level);
  }
  throw Error(ErrorCode::kConfig, "unknown algorithm tag " +
                                      std::to_string(static_cast<int>(algorithm)));
}

CodecSpec CodecSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const auto name = text.substr(0, colon);
  if (colon == std::string_view::npos) {
    if (name == "identity") return identity();
    if (name == "snappy") return snappy();
    throw Error(ErrorCode::kConfig, "unknown codec '" + std::string(text) + "'");
  }
  const auto level_text = text.substr(colon + 1);
  int level = 0;
  auto [ptr, ec] = std::from_chars(level_text.data(), level_text.data() + level_text.size(), level);
  if (ec != std::errc() || ptr != level_text.data() + level_text.size()) {
    throw Error(ErrorCode::kConfig, "bad codec level in '" + std::string(text) + "'");
  }
  if (name == "zstd") return zstd(level);
  if (name == "deflate" || name == "zlib") return deflate(level);
  throw Error(ErrorCode::kConfig, "unknown codec '" + std::string(text) + "'");
}

std::string_view CodecSpec::algorithm_name() const {
  switch (algorithm_) {
    case Algorithm::kIdentity: return "identity";
    case Algorithm::kZstd: return "zstd";
    case Algorithm::kDeflate: return "deflate";
    case Algorithm::kSnappy: return "snappy";
  }
  return "unknown";
}

std::string CodecSpec::to_string() const {
  std::string out(algorithm_name());
  if (algorithm_ == Algorithm::kZstd || algorithm_ == Algorithm::kDeflate) {
    out += ":" + std::to_string(level_);
  }
  return out;
}

std::string compress(std::string_view raw, const CodecSpec& spec) {
  switch (spec.algorithm()) {
    case Algorithm::kIdentity: return std::string(raw);
    case Algorithm::kZstd: return zstd_compress(raw, spec.level());
    case Algorithm::kDeflate: return deflate_compress(raw, spec.level());
    case Algorithm::kSnappy: return snappy_compress_bytes(raw);
  }
  throw Error(ErrorCode::kConfig, "unknown algorithm");
}

std::string decompress(std::string_view compressed, const CodecSpec& spec, size_t raw_size) {
  switch (spec.algorithm()) {
    case Algorithm::kIdentity:
      if (compressed.size() != raw_size) throw integrity("identity: size mismatch");
      return std::string(compressed);
    case Algorithm::kZstd: return zstd_decompress(compressed, raw_size);
    case Algorithm::kDeflate: return deflate_decompress(compressed, raw_size);
    case Algorithm::kSnappy: return snappy_decompress_bytes(compressed, raw_size);
  }
  throw Error(ErrorCode::kConfig, "unknown algorithm");
}

double compression_ratio(uint64_t compressed_size, uint64_t raw_size) {
  if (raw_size == 0) throw Error(ErrorCode::kUndefinedRatio, "raw size is zero");
  return static_cast<double>(compressed_size) / static_cast<double>(raw_size);
}

}  // namespace ppcs
