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

// Command implementations behind the `kgstega` tool. Exit codes: 0 success,
// 1 round-trip trial failure, 2 input or configuration error. Errors are
// reported on the diagnostic stream as `ERROR <Name>: <detail>`.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgstega/bits.hpp"
#include "kgstega/codec.hpp"
#include "kgstega/error.hpp"
#include "kgstega/extractor.hpp"
#include "kgstega/graph.hpp"
#include "kgstega/interchange.hpp"
#include "kgstega/metrics.hpp"
#include "kgstega/realizer.hpp"

namespace kgstega::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitTrialFailure = 1;
inline constexpr int kExitInputError = 2;

struct RunConfig {
  std::string nodes_path;
  std::string edges_path;
  std::string templates_path;
  std::string key_path;
  std::vector<std::string> pins;  // "level:label"
  std::optional<std::string> corpus_path;
  std::string in_path;   // "-" or empty reads standard input where allowed
  std::string out_path;  // "-" or empty writes standard output where allowed
  std::size_t trials = 1000;
  std::size_t max_bits = 512;
  std::optional<std::string> generator;
  std::size_t max_attempts = 5;
  std::uint64_t seed = 20201;
  bool require_perplexity = false;  // --ppl
  bool reweight = false;            // re-estimate edge weights from the corpus
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

inline std::vector<std::string> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<std::string> lines;
  for (auto& l : read_lines(in))
    if (!tokenize(l).empty()) lines.push_back(std::move(l));
  return lines;
}

// Sentence files: one sentence per line; a final empty line is not a sentence.
inline std::vector<std::string> read_sentences(std::istream& in) {
  auto lines = read_lines(in);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

struct Session {
  KnowledgeGraph loaded;
  std::vector<Template> templates;
  std::string secret;
  std::vector<Pin> pins;
  std::vector<std::string> corpus;
};

inline Session open_session(const RunConfig& cfg, bool need_templates = true) {
  Session s;
  s.loaded = load_graph_files(cfg.nodes_path, cfg.edges_path);
  if (cfg.corpus_path) s.corpus = read_corpus(*cfg.corpus_path);
  if (cfg.reweight) {
    if (!cfg.corpus_path) throw Error(ErrorCode::EmptyCorpus, "--reweight needs --corpus");
    s.loaded = estimate_edge_weights(s.loaded, s.corpus);
  }
  if (need_templates) s.templates = load_templates_file(cfg.templates_path);
  s.secret = read_file(cfg.key_path);
  for (const auto& p : cfg.pins) s.pins.push_back(parse_pin(p));
  return s;
}

// Realizes one path and checks that the sentence recovers to the same path.
inline std::string carrier_for(const StegoPath& p, const PathCodec& codec,
                               const PathRecovery& recovery, const std::vector<Template>& templates,
                               SentenceGenerator* generator, std::size_t max_attempts) {
  std::string text = generator
                         ? realize_with_retry(p, codec.graph(), *generator, max_attempts).sentence.text
                         : realize(p, templates, codec.graph()).text;
  const auto back = recovery.recover(text, codec.key().pins);
  if (back.nodes != p.nodes)
    throw Error(ErrorCode::AmbiguousMatch, "carrier '" + text + "' recovers to a different path");
  return text;
}

}  // namespace detail

/// Pin configurations used by roundtrip and eval: no pins, then the first
/// pin, then the first two. Without --pin flags the pins are chosen
/// automatically: the heaviest level-1 node, then its heaviest level-2 child.
inline std::vector<std::vector<Pin>> pin_ladder(const KnowledgeGraph& g,
                                                const std::vector<Pin>& given,
                                                std::size_t max_pins = 2) {
  std::vector<Pin> chain = given;
  if (chain.empty()) {
    const auto viable = viable_subgraph(g);
    std::optional<NodeId> top;
    for (auto id : viable.level_nodes(1))
      if (!top || viable.out_weight(id) > viable.out_weight(*top)) top = id;
    if (top) {
      chain.push_back({1, viable.node(*top).label});
      for (const auto& e : viable.out_edges(*top))
        if (viable.node(e.dst).level == 2) {
          chain.push_back({2, viable.node(e.dst).label});
          break;
        }
    }
  }
  std::vector<std::vector<Pin>> ladder{{}};
  for (std::size_t i = 0; i < chain.size() && i < max_pins; ++i)
    ladder.emplace_back(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(i + 1));
  return ladder;
}

inline std::string describe_pins(const std::vector<Pin>& pins) {
  if (pins.empty()) return "none";
  std::string s;
  for (const auto& p : pins) {
    if (!s.empty()) s += ",";
    s += std::to_string(p.level) + ":" + p.label;
  }
  return s;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "ERROR " << e.name() << ": " << e.detail() << "\n";
    return kExitInputError;
  }
}

inline int run_embed(const RunConfig& cfg, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    auto s = detail::open_session(cfg, !cfg.generator);
    PathCodec codec(s.loaded, StegoKey{s.secret, s.pins});
    PathRecovery recovery(codec.graph());
    std::unique_ptr<SentenceGenerator> generator;
    if (cfg.generator) generator = std::make_unique<CommandGenerator>(*cfg.generator);

    const auto payload = Payload::from_bytes(detail::read_file(cfg.in_path));
    const auto paths = codec.embed_message(payload);
    std::string text;
    ordered_json sidecar = ordered_json::array();
    for (const auto& p : paths) {
      text += detail::carrier_for(p, codec, recovery, s.templates, generator.get(),
                                  cfg.max_attempts);
      text += '\n';
      sidecar.push_back(path_to_json(p, codec.graph()));
    }
    detail::write_file(cfg.out_path, text);
    detail::write_file(cfg.out_path + ".paths.json", sidecar.dump(2) + "\n");
    return kExitOk;
  });
}

inline int run_extract(const RunConfig& cfg, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    auto s = detail::open_session(cfg, false);
    PathCodec codec(s.loaded, StegoKey{s.secret, s.pins});
    PathRecovery recovery(codec.graph());
    std::ifstream in(cfg.in_path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + cfg.in_path);
    std::vector<StegoPath> paths;
    for (const auto& line : detail::read_sentences(in))
      paths.push_back(recovery.recover(line, s.pins));
    const auto payload = codec.extract_message(paths);
    const auto bytes = payload.to_bytes();
    detail::write_file(cfg.out_path,
                       std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    return kExitOk;
  });
}

/// Sentences on input (file or stdin), one path-interchange JSON per line out.
inline int run_recover(const RunConfig& cfg, std::istream& in, std::ostream& out,
                       std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    const auto g = viable_subgraph(load_graph_files(cfg.nodes_path, cfg.edges_path));
    std::vector<Pin> pins;
    for (const auto& p : cfg.pins) pins.push_back(parse_pin(p));
    PathRecovery recovery(g);
    for (const auto& line : detail::read_sentences(in))
      out << path_to_json(recovery.recover(line, pins), g).dump() << "\n";
    return kExitOk;
  });
}

struct RoundtripStats {
  std::string pins;
  std::size_t passed = 0;
  std::size_t failed = 0;
  double measured_bpw = 0.0;
};

/// Full text round trip (payload -> paths -> sentences -> paths -> payload)
/// for every payload of 0..12 bits plus `trials` random payloads of up to
/// `max_bits` bits, under each configuration of the pin ladder.
inline std::vector<RoundtripStats> roundtrip_trials(const KnowledgeGraph& g,
                                                    const std::vector<Template>& templates,
                                                    const std::string& secret,
                                                    const std::vector<std::vector<Pin>>& ladder,
                                                    std::size_t trials, std::size_t max_bits,
                                                    std::uint64_t seed) {
  std::vector<RoundtripStats> out;
  for (const auto& pins : ladder) {
    PathCodec codec(g, StegoKey{secret, pins});
    PathRecovery recovery(codec.graph());
    RoundtripStats stats{describe_pins(pins)};
    std::size_t bits = 0, carrier = 0;
    auto trial = [&](const Payload& m) {
      bool ok = false;
      try {
        std::vector<StegoPath> received;
        for (const auto& p : codec.embed_message(m)) {
          const auto text = realize(p, templates, codec.graph()).text;
          bits += p.bits_consumed;
          carrier += SentenceStats::of(text).byte_bits;
          received.push_back(recovery.recover(text, pins));
        }
        ok = codec.extract_message(received) == m;
      } catch (const Error&) {
        ok = false;
      }
      ++(ok ? stats.passed : stats.failed);
    };
    for (std::size_t len = 0; len <= 12; ++len)
      for (std::uint32_t v = 0; v < (1u << len); ++v) {
        Bits b;
        for (std::size_t i = 0; i < len; ++i) b.push_back((v >> (len - 1 - i)) & 1);
        trial(Payload(std::move(b)));
      }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> length(0, max_bits);
    for (std::size_t t = 0; t < trials; ++t) {
      Bits b(length(rng));
      for (std::size_t i = 0; i < b.size(); ++i) b[i] = rng() & 1;
      trial(Payload(std::move(b)));
    }
    stats.measured_bpw = carrier ? static_cast<double>(bits) / static_cast<double>(carrier) : 0.0;
    out.push_back(stats);
  }
  return out;
}

inline int run_roundtrip(const RunConfig& cfg, std::ostream& out = std::cout,
                         std::ostream& err = std::cerr) {
  return guarded(err, [&]() -> int {
    auto s = detail::open_session(cfg);
    const auto audit = validate_uniqueness(s.loaded);
    if (!audit.clean()) {
      for (const auto& w : audit.witnesses) err << "WITNESS " << describe(w, s.loaded) << "\n";
      throw Error(ErrorCode::AmbiguousMatch, "graph fails the uniqueness audit with " +
                                                 std::to_string(audit.witnesses.size()) +
                                                 " witness(es)");
    }
    const auto ladder = pin_ladder(s.loaded, s.pins, s.pins.empty() ? 2 : s.pins.size());
    const auto results =
        roundtrip_trials(s.loaded, s.templates, s.secret, ladder, cfg.trials, cfg.max_bits, cfg.seed);
    bool all_ok = true;
    for (const auto& r : results) {
      out << "pins=" << r.pins << " passed=" << r.passed << " failed=" << r.failed
          << " measured_bpw=" << std::setprecision(6) << r.measured_bpw << "\n";
      all_ok = all_ok && r.failed == 0;
    }
    return all_ok ? kExitOk : kExitTrialFailure;
  });
}

struct EvalBlock {
  std::vector<Pin> pins;
  ordered_json metrics;
};

/// Metrics for each of the no-pin / one-pin / two-pin configurations.
inline std::vector<EvalBlock> evaluate(const KnowledgeGraph& g,
                                       const std::vector<Template>& templates,
                                       const std::string& secret, const std::vector<Pin>& pins,
                                       const Payload& payload,
                                       const std::vector<std::string>& corpus) {
  std::optional<LanguageModel> lm;
  if (!corpus.empty()) lm = train_lm(corpus);
  std::vector<EvalBlock> blocks;
  for (const auto& config : pin_ladder(g, pins)) {
    PathCodec codec(g, StegoKey{secret, config});
    PathRecovery recovery(codec.graph());
    const auto paths = codec.embed_message(payload);
    std::vector<std::string> sentences;
    for (const auto& p : paths) sentences.push_back(realize(p, templates, codec.graph()).text);
    const auto rates = rate_report(codec.graph(), paths, sentences);

    ordered_json m;
    m["measured_bpw"] = rates.measured_bpw;
    m["literal_paper_rate"] = rates.literal_paper_rate;
    m["mean_perplexity"] = nullptr;
    m["bleu1"] = nullptr;
    m["bleu2"] = nullptr;
    m["rouge_l"] = nullptr;
    m["n_sentences"] = sentences.size();
    if (lm) {
      double ppl = 0;
      for (const auto& s : sentences) ppl += perplexity(*lm, s);
      m["mean_perplexity"] = ppl / static_cast<double>(sentences.size());

      // The reference for a path is the first corpus sentence realizing it.
      std::map<std::vector<NodeId>, std::string> reference;
      for (const auto& line : corpus) {
        try {
          reference.emplace(recovery.recover(line).nodes, line);
        } catch (const Error&) {
        }
      }
      double b1 = 0, b2 = 0, rl = 0;
      std::size_t scored = 0;
      for (std::size_t i = 0; i < paths.size(); ++i) {
        auto it = reference.find(paths[i].nodes);
        if (it == reference.end()) continue;
        const std::vector<std::string> refs{it->second};
        b1 += bleu(sentences[i], refs, 1);
        b2 += bleu(sentences[i], refs, 2);
        rl += rouge_l(sentences[i], it->second);
        ++scored;
      }
      if (scored) {
        m["bleu1"] = b1 / static_cast<double>(scored);
        m["bleu2"] = b2 / static_cast<double>(scored);
        m["rouge_l"] = rl / static_cast<double>(scored);
      }
    }
    blocks.push_back({config, std::move(m)});
  }
  return blocks;
}

inline int run_eval(const RunConfig& cfg, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    if (cfg.require_perplexity && !cfg.corpus_path)
      throw Error(ErrorCode::EmptyCorpus, "--ppl needs --corpus");
    auto s = detail::open_session(cfg);
    if (cfg.corpus_path && s.corpus.empty())
      throw Error(ErrorCode::EmptyCorpus, *cfg.corpus_path + " has no sentences");
    const auto payload = Payload::from_bytes(detail::read_file(cfg.in_path));
    std::string text;
    for (const auto& block : evaluate(s.loaded, s.templates, s.secret, s.pins, payload, s.corpus))
      text += block.metrics.dump() + "\n";
    if (cfg.out_path.empty() || cfg.out_path == "-")
      out << text;
    else
      detail::write_file(cfg.out_path, text);
    return kExitOk;
  });
}

}  // namespace kgstega::cli
