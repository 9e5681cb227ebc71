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

#include "ppcs/corpus.h"

#include <array>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ppcs/error.h"

namespace ppcs {

namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

constexpr std::array<int8_t, 256> make_decode_table() {
  std::array<int8_t, 256> t{};
  for (auto& v : t) v = -1;
  for (int i = 0; i < 64; ++i) t[static_cast<unsigned char>(kAlphabet[i])] = static_cast<int8_t>(i);
  return t;
}

constexpr auto kDecodeTable = make_decode_table();

Error line_error(ErrorCode code, uint64_t line, const std::string& what) {
  return Error(code, "line " + std::to_string(line) + ": " + what);
}

CorpusRecord record_from_json(const nlohmann::json& j, uint64_t line) {
  if (!j.is_object()) throw line_error(ErrorCode::kSchema, line, "record is not an object");
  for (const char* field : {"id", "names", "content"}) {
    if (!j.contains(field)) {
      throw line_error(ErrorCode::kSchema, line, std::string("missing field '") + field + "'");
    }
  }
  CorpusRecord rec;
  const auto& id = j["id"];
  if (!id.is_string() || id.get_ref<const std::string&>().empty()) {
    throw line_error(ErrorCode::kSchema, line, "'id' must be a nonempty string");
  }
  rec.content_id = id.get<std::string>();

  const auto& names = j["names"];
  if (!names.is_array() || names.empty()) {
    throw line_error(ErrorCode::kSchema, line, "'names' must be a nonempty array");
  }
  for (const auto& pair : names) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
        !pair[1].is_number_integer()) {
      throw line_error(ErrorCode::kSchema, line, "'names' entries must be [string, int]");
    }
    if (pair[1].is_number_unsigned() == false && pair[1].get<int64_t>() < 0) {
      throw line_error(ErrorCode::kSchema, line, "negative filename count");
    }
    rec.filename_candidates.push_back({pair[0].get<std::string>(), pair[1].get<uint64_t>()});
  }

  const auto& content = j["content"];
  if (!content.is_string()) throw line_error(ErrorCode::kSchema, line, "'content' must be a string");
  try {
    rec.content = base64_decode(content.get_ref<const std::string&>());
  } catch (const Error& e) {
    throw line_error(ErrorCode::kDecode, line, e.what());
  }

  if (j.contains("lang") && !j["lang"].is_null()) {
    if (!j["lang"].is_string()) throw line_error(ErrorCode::kSchema, line, "'lang' must be a string");
    rec.language = j["lang"].get<std::string>();
  }
  return rec;
}

}  // namespace

std::string base64_encode(std::string_view raw) {
  std::string out;
  out.reserve((raw.size() + 2) / 3 * 4);
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  size_t i = 0;
  for (; i + 3 <= raw.size(); i += 3) {
    uint32_t v = (p[i] << 16) | (p[i + 1] << 8) | p[i + 2];
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out.push_back(kAlphabet[v & 63]);
  }
  size_t rest = raw.size() - i;
  if (rest == 1) {
    uint32_t v = p[i] << 16;
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.append("==");
  } else if (rest == 2) {
    uint32_t v = (p[i] << 16) | (p[i + 1] << 8);
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::string base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw Error(ErrorCode::kDecode, "base64 length not a multiple of 4");
  std::string out;
  out.reserve(text.size() / 4 * 3);
  for (size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    int pad = 0;
    uint32_t v = 0;
    for (size_t j = 0; j < 4; ++j) {
      char c = text[i + j];
      if (c == '=') {
        // Padding is only legal in the last two positions of the final quad.
        if (!last || j < 2) throw Error(ErrorCode::kDecode, "misplaced base64 padding");
        ++pad;
        v <<= 6;
        continue;
      }
      if (pad > 0) throw Error(ErrorCode::kDecode, "data after base64 padding");
      int8_t d = kDecodeTable[static_cast<unsigned char>(c)];
      if (d < 0) throw Error(ErrorCode::kDecode, "invalid base64 character");
      v = (v << 6) | static_cast<uint32_t>(d);
    }
    out.push_back(static_cast<char>(v >> 16));
    if (pad < 2) out.push_back(static_cast<char>(v >> 8));
    if (pad < 1) out.push_back(static_cast<char>(v));
  }
  return out;
}

const std::string& canonical_filename(const std::vector<FilenameCandidate>& candidates) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kPrecondition, "canonical_filename: empty candidate list");
  }
  const FilenameCandidate* best = &candidates.front();
  for (const auto& c : candidates) {
    if (c.count > best->count || (c.count == best->count && c.name < best->name)) best = &c;
  }
  return best->name;
}

std::string serialize_record(const CorpusRecord& record) {
  nlohmann::json j;
  j["id"] = record.content_id;
  auto names = nlohmann::json::array();
  for (const auto& c : record.filename_candidates) names.push_back({c.name, c.count});
  j["names"] = std::move(names);
  j["content"] = base64_encode(record.content);
  if (record.language) j["lang"] = *record.language;
  return j.dump();
}

std::optional<CorpusRecord> CorpusReader::next() {
  while (std::getline(in_, line_)) {
    ++line_number_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    if (line_.empty() || line_.front() == '#') continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line_);
    } catch (const nlohmann::json::parse_error& e) {
      throw line_error(ErrorCode::kParse, line_number_, e.what());
    }
    return record_from_json(j, line_number_);
  }
  if (in_.bad()) throw Error(ErrorCode::kIO, "corpus stream read failure");
  return std::nullopt;
}

std::vector<CorpusRecord> parse_record_stream(std::istream& in) {
  std::vector<CorpusRecord> out;
  std::unordered_set<std::string> seen;
  CorpusReader reader(in);
  while (auto rec = reader.next()) {
    if (!seen.insert(rec->content_id).second) {
      throw line_error(ErrorCode::kSchema, reader.line_number(),
                       "duplicate id '" + rec->content_id + "'");
    }
    out.push_back(std::move(*rec));
  }
  return out;
}

std::vector<CorpusRecord> parse_record_stream(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_record_stream(in);
}

}  // namespace ppcs
