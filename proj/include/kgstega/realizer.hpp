/*
 * Copyright 2026 The kgstega Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Surface realization: StegoPath -> carrier sentence.
//
// Templates are patterns with slots {1}..{m}, where slot k takes the label of
// the k-th node on the path (the level-k node when the path visits every
// level), and optional {rel_k} slots for the relation of hop k -> k+1. A
// template applies to paths of exactly m nodes. Among the applicable
// templates, one is chosen by a hash of the path's node ids, so the choice
// leaks nothing beyond the path itself.
//
// Template file: TSV `id<TAB>pattern`, blank lines ignored.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unistd.h>
#include <variant>
#include <vector>

#include "kgstega/error.hpp"
#include "kgstega/graph.hpp"
#include "kgstega/interchange.hpp"
#include "kgstega/path.hpp"
#include "kgstega/tokenize.hpp"

namespace kgstega {

class Template {
 public:
  struct Slot {
    bool relation;      // {rel_k} rather than {k}
    std::size_t index;  // k, 1-based
  };
  using Piece = std::variant<std::string, Slot>;

  Template(std::string id, std::string pattern) : id_(std::move(id)), pattern_(std::move(pattern)) {
    parse();
  }

  const std::string& id() const { return id_; }
  const std::string& pattern() const { return pattern_; }
  /// Number of node slots.
  std::size_t arity() const { return arity_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  Error malformed(const std::string& why) const {
    return Error(ErrorCode::MalformedTemplate, "template '" + id_ + "': " + why);
  }

  void parse() {
    if (pattern_.empty()) throw malformed("empty pattern");
    std::set<std::size_t> levels, rels;
    std::string literal;
    for (std::size_t i = 0; i < pattern_.size(); ++i) {
      if (pattern_[i] == '}') throw malformed("unmatched '}'");
      if (pattern_[i] != '{') {
        literal.push_back(pattern_[i]);
        continue;
      }
      const auto close = pattern_.find('}', i);
      if (close == std::string::npos) throw malformed("unterminated slot");
      std::string_view body(pattern_.data() + i + 1, close - i - 1);
      const bool rel = body.starts_with("rel_");
      if (rel) body.remove_prefix(4);
      const auto k = detail::parse_int<std::size_t>(body);
      if (!k || *k == 0) throw malformed("bad slot '{" + std::string(body) + "}'");
      if (!(rel ? rels : levels).insert(*k).second) throw malformed("repeated slot");
      if (!literal.empty()) pieces_.emplace_back(std::move(literal));
      literal.clear();
      pieces_.emplace_back(Slot{rel, *k});
      i = close;
    }
    if (!literal.empty()) pieces_.emplace_back(std::move(literal));
    arity_ = levels.size();
    if (arity_ == 0) throw malformed("no node slots");
    if (*levels.rbegin() != arity_) throw malformed("node slots must be {1}..{m}");
    if (!rels.empty() && *rels.rbegin() >= arity_) throw malformed("relation slot out of range");
  }

  std::string id_;
  std::string pattern_;
  std::vector<Piece> pieces_;
  std::size_t arity_ = 0;
};

inline std::vector<Template> load_templates(std::istream& in) {
  std::vector<Template> out;
  detail::for_each_line(in, [&](std::size_t no, std::string_view line) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0)
      throw Error(ErrorCode::MalformedTemplate,
                  "line " + std::to_string(no) + ": expected id<TAB>pattern");
    out.emplace_back(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  });
  return out;
}

inline std::vector<Template> load_templates_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return load_templates(in);
}

struct StegoSentence {
  std::string text;
  StegoPath path;
  std::string template_id;
};

/// FNV-1a over the big-endian node ids.
inline std::uint64_t path_hash(const StegoPath& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto id : p.nodes) {
    const auto u = static_cast<std::uint64_t>(id);
    for (int i = 7; i >= 0; --i) {
      h ^= (u >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

inline StegoSentence realize(const StegoPath& p, const std::vector<Template>& templates,
                             const KnowledgeGraph& g) {
  std::vector<const Template*> fit;
  for (const auto& t : templates)
    if (t.arity() == p.nodes.size()) fit.push_back(&t);
  if (fit.empty())
    throw Error(ErrorCode::NoTemplateForArity,
                "no template with " + std::to_string(p.nodes.size()) + " node slots");
  const Template& t = *fit[path_hash(p) % fit.size()];
  std::string text;
  for (const auto& piece : t.pieces()) {
    if (const auto* lit = std::get_if<std::string>(&piece)) {
      text += *lit;
      continue;
    }
    const auto& slot = std::get<Template::Slot>(piece);
    const auto k = slot.index - 1;
    if (!slot.relation) {
      text += g.node(p.nodes[k]).label;
    } else {
      const Edge* e = g.edge(p.nodes[k], p.nodes[k + 1]);
      if (!e) throw Error(ErrorCode::EdgeNotInGraph, "path hop " + std::to_string(slot.index));
      text += e->relation;
    }
  }
  return StegoSentence{std::move(text), p, t.id()};
}

/// True iff every node label of `p` appears as a contiguous token run within
/// one phrase.
inline bool verify_coverage(std::string_view sentence, const StegoPath& p,
                            const KnowledgeGraph& g) {
  const auto phrases = tokenize_phrases(sentence);
  for (auto id : p.nodes)
    if (!contains_subsequence(phrases, tokenize(g.node(id).label))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Generators and the coverage retry loop
// ---------------------------------------------------------------------------

/// Produces candidate sentences for a path. One call may return several.
class SentenceGenerator {
 public:
  virtual ~SentenceGenerator() = default;
  virtual std::vector<std::string> generate(const StegoPath& p, const KnowledgeGraph& g) = 0;
  virtual std::string name() const = 0;
};

class TemplateGenerator final : public SentenceGenerator {
 public:
  explicit TemplateGenerator(std::vector<Template> templates) : templates_(std::move(templates)) {}

  std::vector<std::string> generate(const StegoPath& p, const KnowledgeGraph& g) override {
    return {realize(p, templates_, g).text};
  }
  std::string name() const override { return "template"; }
  const std::vector<Template>& templates() const { return templates_; }

 private:
  std::vector<Template> templates_;
};

/// Runs an external command per call: path-interchange JSON on its standard
/// input, one candidate per output line, exit status 0.
class CommandGenerator final : public SentenceGenerator {
 public:
  explicit CommandGenerator(std::string command) : command_(std::move(command)) {}

  std::vector<std::string> generate(const StegoPath& p, const KnowledgeGraph& g) override {
    auto tmpl = (std::filesystem::temp_directory_path() / "kgstega-path-XXXXXX").string();
    const int fd = ::mkstemp(tmpl.data());
    if (fd < 0) throw Error(ErrorCode::IoError, "cannot create a temporary file");
    ::close(fd);
    struct Cleanup {
      std::string path;
      ~Cleanup() { std::filesystem::remove(path); }
    } cleanup{tmpl};
    {
      std::ofstream out(tmpl);
      out << path_to_json(p, g).dump() << '\n';
    }
    const std::string cmd = "(" + command_ + "\n) < '" + tmpl + "'";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) throw Error(ErrorCode::GeneratorFailed, "cannot start '" + command_ + "'");
    std::string output;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
    const int status = ::pclose(pipe);
    if (status != 0)
      throw Error(ErrorCode::GeneratorFailed,
                  "'" + command_ + "' exited with status " + std::to_string(status));
    std::vector<std::string> lines;
    std::istringstream in(output);
    for (auto& line : read_lines(in))
      if (!line.empty()) lines.push_back(std::move(line));
    return lines;
  }
  std::string name() const override { return "command"; }

 private:
  std::string command_;
};

struct RetryOutcome {
  StegoSentence sentence;
  std::size_t attempts = 0;
};

/// Draws candidates until one covers every node label. Each candidate
/// checked, and each generator call that yields nothing, is one attempt.
inline RetryOutcome realize_with_retry(const StegoPath& p, const KnowledgeGraph& g,
                                       SentenceGenerator& generator, std::size_t max_attempts) {
  std::vector<std::string> pending;
  std::size_t next = 0;
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    if (next == pending.size()) {
      pending = generator.generate(p, g);
      next = 0;
      if (pending.empty()) continue;
    }
    auto& candidate = pending[next++];
    if (verify_coverage(candidate, p, g))
      return RetryOutcome{StegoSentence{std::move(candidate), p, generator.name()}, attempt};
  }
  throw Error(ErrorCode::CoverageExhausted,
              "no covering sentence in " + std::to_string(max_attempts) + " attempts");
}

}  // namespace kgstega
