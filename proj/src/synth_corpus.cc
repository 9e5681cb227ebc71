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

#include "ppcs/synth_corpus.h"

#include <array>
#include <cstdio>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ppcs/error.h"
#include "ppcs/file.h"
#include "ppcs/prng.h"

namespace ppcs {

namespace {

enum class Style { kCLike, kPython, kProse, kConfig };

struct Language {
  std::string_view ext;
  std::string_view tag;
  Style style;
  std::array<std::string_view, 6> keywords;
};

constexpr std::array<Language, 14> kLanguages = {{
    {"c", "C", Style::kCLike, {"int", "static", "const", "void", "size_t", "struct"}},
    {"h", "C", Style::kCLike, {"int", "extern", "const", "void", "typedef", "struct"}},
    {"cpp", "C++", Style::kCLike, {"auto", "const", "std::string", "int", "bool", "template"}},
    {"java", "Java", Style::kCLike, {"public", "private", "final", "int", "String", "void"}},
    {"js", "JavaScript", Style::kCLike, {"const", "let", "var", "function", "async", "export"}},
    {"ts", "TypeScript", Style::kCLike, {"const", "let", "readonly", "export", "string", "number"}},
    {"go", "Go", Style::kCLike, {"func", "var", "int", "string", "error", "type"}},
    {"rs", "Rust", Style::kCLike, {"let", "fn", "pub", "mut", "u64", "impl"}},
    {"py", "Python", Style::kPython, {"def", "return", "import", "class", "yield", "lambda"}},
    {"rb", "Ruby", Style::kPython, {"def", "end", "require", "module", "attr", "yield"}},
    {"md", "Markdown", Style::kProse, {"the", "a", "this", "to", "and", "of"}},
    {"txt", "Text", Style::kProse, {"the", "a", "is", "to", "and", "for"}},
    {"json", "JSON", Style::kConfig, {"true", "false", "null", "name", "version", "id"}},
    {"yml", "YAML", Style::kConfig, {"true", "false", "name", "on", "run", "env"}},
}};

constexpr std::array<std::string_view, 96> kWords = {
    "add",     "alloc",   "apply",   "array",   "async",  "attr",    "base",    "batch",
    "bind",    "block",   "buffer",  "build",   "cache",  "call",    "check",   "child",
    "client",  "close",   "config",  "conn",    "count",  "create",  "cursor",  "data",
    "decode",  "delete",  "depth",   "dict",    "dump",   "encode",  "entry",   "error",
    "event",   "field",   "file",    "filter",  "find",   "flag",    "flush",   "format",
    "frame",   "get",     "graph",   "handle",  "hash",   "header",  "index",   "init",
    "input",   "item",    "key",     "label",   "layer",  "length",  "level",   "list",
    "load",    "lock",    "log",     "map",     "merge",  "meta",    "mode",    "model",
    "name",    "node",    "offset",  "open",    "option", "output",  "page",    "parse",
    "path",    "point",   "pool",    "port",    "query",  "queue",   "read",    "record",
    "request", "reset",   "result",  "route",   "scope",  "server",  "session", "size",
    "socket",  "state",   "stream",  "table",   "token",  "update",  "value",   "write",
};

constexpr std::array<std::string_view, 24> kBasenames = {
    "main",   "utils",  "index",   "config", "setup",  "test",   "app",    "server",
    "client", "model",  "types",   "common", "helpers", "api",   "core",   "parser",
    "README", "LICENSE", "Makefile", "init",  "db",     "routes", "schema", "worker",
};

class Gen {
 public:
  explicit Gen(uint64_t seed) : rng_(seed) {}

  uint64_t below(uint64_t n) { return rng_.below(n); }
  double unit() { return rng_.unit(); }
  uint64_t next() { return rng_.next(); }

  std::string_view word() { return kWords[below(kWords.size())]; }

  std::string ident() {
    std::string s(word());
    const uint64_t parts = below(3);
    for (uint64_t i = 0; i < parts; ++i) {
      s += below(2) ? '_' : '.';
      s += word();
    }
    return s;
  }

  std::string number() { return std::to_string(below(100000)); }

 private:
  Xoshiro256 rng_;
};

// One line in the family's style. `vocab` biases identifiers toward the
// family's own names; fresh lines pass an empty vocabulary.
std::string make_line(Gen& g, const Language& lang, const std::vector<std::string>& vocab) {
  auto id = [&]() -> std::string {
    if (!vocab.empty() && g.below(4) != 0) return vocab[g.below(vocab.size())];
    return g.ident();
  };
  auto kw = [&]() { return std::string(lang.keywords[g.below(lang.keywords.size())]); };
  static constexpr std::array<std::string_view, 6> kOps = {"+", "-", "==", "<", "*", "!="};
  auto op = [&]() { return std::string(kOps[g.below(kOps.size())]); };
  std::string indent(2 * g.below(4), ' ');

  switch (lang.style) {
    case Style::kCLike:
      switch (g.below(6)) {
        case 0: return indent + kw() + " " + id() + " = " + id() + "(" + id() + ", " + g.number() + ");";
        case 1: return indent + "if (" + id() + " " + op() + " " + g.number() + ") {";
        case 2: return indent + "return " + id() + " " + op() + " " + id() + ";";
        case 3: return indent + "}";
        case 4: return indent + "// " + std::string(g.word()) + " " + std::string(g.word()) + " " + std::string(g.word());
        default: return indent + id() + "(" + id() + ", " + id() + ");";
      }
    case Style::kPython:
      switch (g.below(5)) {
        case 0: return indent + id() + " = " + id() + "(" + id() + ", " + g.number() + ")";
        case 1: return indent + kw() + " " + id() + "(self, " + id() + "):";
        case 2: return indent + "if " + id() + " " + op() + " " + g.number() + ":";
        case 3: return indent + "return " + id();
        default: return indent + "# " + std::string(g.word()) + " " + std::string(g.word());
      }
    case Style::kProse: {
      std::string s;
      const uint64_t n = 6 + g.below(9);
      for (uint64_t i = 0; i < n; ++i) {
        if (i) s += ' ';
        s += g.below(3) == 0 ? kw() : (vocab.empty() || g.below(2) ? std::string(g.word()) : id());
      }
      return s + ".";
    }
    case Style::kConfig:
      if (g.below(2)) return indent + "\"" + id() + "\": \"" + id() + "\",";
      return indent + id() + ": " + (g.below(2) ? g.number() : kw());
  }
  return {};
}

std::string hex_id(Gen& g) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s = "swh:1:cnt:";
  for (int i = 0; i < 40; ++i) s += kHex[g.below(16)];
  return s;
}

struct Family {
  const Language* lang;
  std::string name;
  std::vector<std::string> vocab;
  std::vector<std::string> lines;
  uint64_t seed;
};

}  // namespace

void SynthCorpusOptions::validate() const {
  if (num_files == 0) throw Error(ErrorCode::kConfig, "num_files must be positive");
  if (files_per_family == 0) throw Error(ErrorCode::kConfig, "files_per_family must be positive");
  if (overlap < 0 || overlap > 1) throw Error(ErrorCode::kConfig, "overlap must be in [0, 1]");
  if (alias_probability < 0 || alias_probability > 1) {
    throw Error(ErrorCode::kConfig, "alias_probability must be in [0, 1]");
  }
}

SynthCorpusStats generate_synthetic_corpus(const SynthCorpusOptions& o,
                                           const std::function<void(CorpusRecord&&)>& sink) {
  o.validate();
  Gen g(o.seed);
  const uint64_t num_families = std::max<uint64_t>(1, o.num_files / o.files_per_family);
  const double mean_bytes = static_cast<double>(o.target_bytes) / static_cast<double>(o.num_files);

  std::vector<Family> families;
  std::set<std::string> names;
  families.reserve(num_families);
  while (families.size() < num_families) {
    Family f;
    f.lang = &kLanguages[g.below(kLanguages.size())];
    std::string base(kBasenames[g.below(kBasenames.size())]);
    if (g.below(3) != 0) base += (g.below(2) ? "_" : "-") + std::string(g.word());
    if (g.below(4) == 0) base += std::to_string(g.below(100));
    f.name = base + "." + std::string(f.lang->ext);
    if (!names.insert(f.name).second) continue;
    for (int i = 0; i < 24; ++i) f.vocab.push_back(g.ident());
    // Template sizes spread over [0.25, 1.75] x the mean file size.
    const double budget = mean_bytes * (0.25 + 1.5 * g.unit());
    double size = 0;
    while (size < budget) {
      f.lines.push_back(make_line(g, *f.lang, f.vocab));
      size += static_cast<double>(f.lines.back().size() + 1);
    }
    f.seed = g.next();
    families.push_back(std::move(f));
  }

  SynthCorpusStats stats;
  stats.families = families.size();
  static const std::vector<std::string> kNoVocab;
  for (uint64_t i = 0; i < o.num_files; ++i) {
    // The first num_families files seed every family once; the rest are random.
    Family& f = families[i < families.size() ? i : g.below(families.size())];
    uint64_t mix = i;
    Gen fg(f.seed ^ Xoshiro256::splitmix64(mix));
    CorpusRecord r;
    r.content_id = hex_id(fg);
    r.language = std::string(f.lang->tag);
    const uint64_t top = 2 + fg.below(1000);
    r.filename_candidates.push_back({f.name, top});
    if (fg.unit() < o.alias_probability) {
      r.filename_candidates.push_back({"copy_of_" + f.name, fg.below(top)});
    }
    if (fg.below(1000) != 0) {  // about one file in a thousand is empty
      std::string& c = r.content;
      c.reserve(static_cast<size_t>(mean_bytes * 2));
      for (const auto& line : f.lines) {
        if (fg.unit() < o.overlap) {
          c += line;
        } else {
          c += make_line(fg, *f.lang, kNoVocab);
        }
        c += '\n';
      }
    }
    stats.content_bytes += r.content.size();
    ++stats.files;
    sink(std::move(r));
  }
  return stats;
}

SynthCorpusStats write_synthetic_corpus(const std::filesystem::path& path,
                                        const SynthCorpusOptions& options) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  WritableFile out(tmp, /*truncate=*/true, 4 << 20);
  out.append("# synthetic corpus seed=" + std::to_string(options.seed) +
             " files=" + std::to_string(options.num_files) + "\n");
  const auto stats = generate_synthetic_corpus(options, [&](CorpusRecord&& r) {
    out.append(serialize_record(r));
    out.append("\n");
  });
  out.close();
  std::filesystem::rename(tmp, path);
  return stats;
}

}  // namespace ppcs
