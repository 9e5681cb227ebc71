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
#include <functional>

#include "ppcs/corpus.h"

namespace ppcs {

// Deterministic generator of source-like files with controlled cross-file
// redundancy. Files belong to families sharing one canonical name and one
// line template; each file keeps a template line with probability `overlap`
// and otherwise emits a fresh random line. Files are emitted with families
// interleaved, so the stream is not in key order.
struct SynthCorpusOptions {
  uint64_t num_files = 100000;
  uint64_t target_bytes = 1ULL << 30;  // total content, approximate
  uint64_t files_per_family = 40;      // mean
  double overlap = 0.7;
  double alias_probability = 0.1;  // extra lower-count filename candidates
  uint64_t seed = 1;

  void validate() const;
};

struct SynthCorpusStats {
  uint64_t files = 0;
  uint64_t content_bytes = 0;
  uint64_t families = 0;
};

SynthCorpusStats generate_synthetic_corpus(const SynthCorpusOptions& options,
                                           const std::function<void(CorpusRecord&&)>& sink);

// Writes the JSONL corpus format to `path`.
SynthCorpusStats write_synthetic_corpus(const std::filesystem::path& path,
                                        const SynthCorpusOptions& options);

}  // namespace ppcs
