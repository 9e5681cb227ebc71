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
#include <chrono>
#include <cstdint>
#include <istream>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include "ppcs/engine.h"
#include "ppcs/ppc_key.h"

namespace ppcs {

// Transport-level failure of a slow tier; distinct from "not found".
class BackendFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Slow object store addressed by intrinsic content id.
class BackendClient {
 public:
  virtual ~BackendClient() = default;
  // nullopt when the id is unknown; throws BackendFailure when unreachable.
  virtual std::optional<std::string> fetch(std::string_view content_id) = 0;
  virtual std::string name() const = 0;
};

// In-memory backend that charges latency + size / bandwidth per request.
class SimulatedBackend : public BackendClient {
 public:
  SimulatedBackend(std::chrono::nanoseconds latency_per_request, double bandwidth_bytes_per_s);

  void add(std::string content_id, std::string content);
  // Loads every record of a JSONL corpus stream.
  void load_corpus(std::istream& in);
  void set_available(bool available) { available_ = available; }

  std::optional<std::string> fetch(std::string_view content_id) override;
  std::string name() const override { return "simulated"; }

  uint64_t fetch_count() const { return fetches_.load(); }
  uint64_t total_bytes() const { return total_bytes_; }

 private:
  std::chrono::nanoseconds latency_;
  double bandwidth_;
  std::atomic<bool> available_{true};
  std::atomic<uint64_t> fetches_{0};
  uint64_t total_bytes_ = 0;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::string> contents_;
};

enum class AdmissionPolicy { kAdmitAlways, kAdmitNever };
enum class Source { kCache, kBackend };

struct TieredResult {
  std::optional<std::string> value;
  Source source = Source::kCache;
};

struct HitRateReport {
  uint64_t hits = 0;
  uint64_t misses = 0;
  double hit_ratio = 0.0;  // zero when no lookups happened
  uint64_t backend_bytes = 0;
};

// Cache-first lookup facade: the PPC store answers hits, misses are
// forwarded to the backend and optionally admitted into the store.
class TieredCache {
 public:
  TieredCache(Engine& engine, BackendClient& backend, AdmissionPolicy policy)
      : engine_(engine), backend_(backend), policy_(policy) {}

  // Throws kTier when the key misses the cache and the backend fails.
  TieredResult get(const PpcKey& key);

  // Counts since the previous call that reset the window.
  HitRateReport hit_rate_report(bool reset_window = false);

  uint64_t admissions() const { return admissions_.load(); }
  uint64_t rejected_admissions() const { return rejected_.load(); }

 private:
  Engine& engine_;
  BackendClient& backend_;
  AdmissionPolicy policy_;
  std::atomic<uint64_t> hits_{0};
  std::atomic<uint64_t> misses_{0};
  std::atomic<uint64_t> backend_bytes_{0};
  std::atomic<uint64_t> admissions_{0};
  std::atomic<uint64_t> rejected_{0};
};

}  // namespace ppcs
