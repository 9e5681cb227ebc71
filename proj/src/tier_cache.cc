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

#include "ppcs/tier_cache.h"

#include <mutex>
#include <thread>

#include "ppcs/corpus.h"

namespace ppcs {

SimulatedBackend::SimulatedBackend(std::chrono::nanoseconds latency_per_request,
                                   double bandwidth_bytes_per_s)
    : latency_(latency_per_request), bandwidth_(bandwidth_bytes_per_s) {
  if (!(bandwidth_ > 0)) throw Error(ErrorCode::kConfig, "backend bandwidth must be positive");
}

void SimulatedBackend::add(std::string content_id, std::string content) {
  std::unique_lock lock(mu_);
  total_bytes_ += content.size();
  auto [it, inserted] = contents_.insert_or_assign(std::move(content_id), std::move(content));
  (void)it;
  (void)inserted;
}

void SimulatedBackend::load_corpus(std::istream& in) {
  CorpusReader reader(in);
  while (auto rec = reader.next()) add(std::move(rec->content_id), std::move(rec->content));
}

std::optional<std::string> SimulatedBackend::fetch(std::string_view content_id) {
  fetches_.fetch_add(1);
  if (!available_) throw BackendFailure("simulated backend unavailable");
  std::optional<std::string> out;
  {
    std::shared_lock lock(mu_);
    auto it = contents_.find(std::string(content_id));
    if (it != contents_.end()) out = it->second;
  }
  const size_t bytes = out ? out->size() : 0;
  const auto transfer = std::chrono::duration<double>(static_cast<double>(bytes) / bandwidth_);
  std::this_thread::sleep_for(latency_ + std::chrono::duration_cast<std::chrono::nanoseconds>(transfer));
  return out;
}

TieredResult TieredCache::get(const PpcKey& key) {
  if (auto hit = engine_.get(key)) {
    hits_.fetch_add(1);
    return {std::move(hit), Source::kCache};
  }
  misses_.fetch_add(1);
  std::optional<std::string> fetched;
  try {
    fetched = backend_.fetch(key.content_id);
  } catch (const BackendFailure& e) {
    throw Error(ErrorCode::kTier, "cache miss and backend '" + backend_.name() +
                                      "' failed: " + e.what());
  }
  if (!fetched) return {std::nullopt, Source::kBackend};
  backend_bytes_.fetch_add(fetched->size());
  if (policy_ == AdmissionPolicy::kAdmitAlways) {
    try {
      engine_.put(key, *fetched);
      admissions_.fetch_add(1);
    } catch (const Error& e) {
      // Out of room: serve the value without caching it.
      if (e.code() != ErrorCode::kCapacity) throw;
      rejected_.fetch_add(1);
    }
  }
  return {std::move(fetched), Source::kBackend};
}

HitRateReport TieredCache::hit_rate_report(bool reset_window) {
  HitRateReport r;
  if (reset_window) {
    r.hits = hits_.exchange(0);
    r.misses = misses_.exchange(0);
    r.backend_bytes = backend_bytes_.exchange(0);
  } else {
    r.hits = hits_.load();
    r.misses = misses_.load();
    r.backend_bytes = backend_bytes_.load();
  }
  const uint64_t total = r.hits + r.misses;
  r.hit_ratio = total ? static_cast<double>(r.hits) / static_cast<double>(total) : 0.0;
  return r;
}

}  // namespace ppcs
