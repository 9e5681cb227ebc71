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
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ppcs {

struct FilenameCandidate {
  std::string name;
  uint64_t count = 0;

  bool operator==(const FilenameCandidate&) const = default;
};

// One content object of a source-code corpus together with the names it was
// observed under.
struct CorpusRecord {
  std::string content_id;
  std::vector<FilenameCandidate> filename_candidates;
  std::string content;
  std::optional<std::string> language;

  bool operator==(const CorpusRecord&) const = default;
};

std::string base64_encode(std::string_view raw);
// Strict RFC 4648 decoding with padding; anything else is a kDecode error.
std::string base64_decode(std::string_view text);

// Most frequent name; equal counts resolve to the byte-wise smallest name.
const std::string& canonical_filename(const std::vector<FilenameCandidate>& candidates);

// One JSONL line, without the trailing newline.
std::string serialize_record(const CorpusRecord& record);

// Streaming JSONL reader. Holds at most one line in memory; errors carry the
// 1-based line number and stop the stream.
class CorpusReader {
 public:
  explicit CorpusReader(std::istream& in) : in_(in) {}

  // Returns the next record, or nullopt at end of stream.
  std::optional<CorpusRecord> next();

  uint64_t line_number() const { return line_number_; }

 private:
  std::istream& in_;
  std::string line_;
  uint64_t line_number_ = 0;
};

std::vector<CorpusRecord> parse_record_stream(std::istream& in);
std::vector<CorpusRecord> parse_record_stream(std::string_view text);

}  // namespace ppcs
