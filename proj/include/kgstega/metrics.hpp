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

// Evaluation: embedding rate, n-gram perplexity, BLEU and ROUGE-L.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgstega/error.hpp"
#include "kgstega/graph.hpp"
#include "kgstega/path.hpp"
#include "kgstega/tokenize.hpp"

namespace kgstega {

// ---------------------------------------------------------------------------
// Embedding rate
// ---------------------------------------------------------------------------

struct SentenceStats {
  std::size_t word_count = 0;
  std::vector<std::size_t> letters_per_word;
  std::size_t byte_bits = 0;  // 8 * total letters

  /// Letters are alphabetic characters: ASCII letters plus any non-ASCII code
  /// point that is not punctuation. Whitespace, digits and punctuation are
  /// not letters.
  static SentenceStats of(std::string_view sentence) {
    SentenceStats s;
    for (const auto& token : tokenize(sentence)) {
      std::size_t letters = 0;
      for (std::size_t pos = 0; pos < token.size();) {
        const auto cp = detail::decode_utf8(token, pos);
        const bool ascii_alpha = (cp.value >= 'a' && cp.value <= 'z') ||
                                 (cp.value >= 'A' && cp.value <= 'Z');
        if (ascii_alpha || (cp.value >= 0x80 && !detail::is_punct(cp.value))) ++letters;
        pos += cp.width;
      }
      s.letters_per_word.push_back(letters);
      s.byte_bits += 8 * letters;
    }
    s.word_count = s.letters_per_word.size();
    return s;
  }
};

struct SentenceRate {
  std::size_t payload_bits = 0;
  std::size_t carrier_bits = 0;
  std::size_t edge_count_sum = 0;  // sum of |E_out| over the visited nodes
};

struct RateReport {
  double measured_bpw = 0.0;        // sum of payload bits / sum of carrier bits
  double literal_paper_rate = 0.0;  // mean over sentences of edge_count_sum / carrier bits
  double ratio = 0.0;               // literal / measured (0 when measured is 0)
  std::vector<SentenceRate> per_sentence;
};

namespace detail {

inline void check_aligned(std::size_t paths, std::size_t sentences) {
  if (paths != sentences)
    throw Error(ErrorCode::LengthMismatch, std::to_string(paths) + " paths vs " +
                                               std::to_string(sentences) + " sentences");
  if (paths == 0) throw Error(ErrorCode::EmptyInput, "no sentences to rate");
}

inline std::size_t carrier_bits(std::string_view sentence) {
  const auto b = SentenceStats::of(sentence).byte_bits;
  if (b == 0) throw Error(ErrorCode::EmptySentence, "sentence has no letters");
  return b;
}

}  // namespace detail

inline double measured_rate(std::span<const StegoPath> paths,
                            std::span<const std::string> sentences) {
  detail::check_aligned(paths.size(), sentences.size());
  std::size_t bits = 0, carrier = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    bits += paths[i].bits_consumed;
    carrier += detail::carrier_bits(sentences[i]);
  }
  return static_cast<double>(bits) / static_cast<double>(carrier);
}

/// The rate formula with the out-edge COUNT of every visited node standing in
/// for the bits of that hop, averaged per sentence.
inline double literal_paper_rate(const KnowledgeGraph& g, std::span<const StegoPath> paths,
                                 std::span<const std::string> sentences) {
  detail::check_aligned(paths.size(), sentences.size());
  double total = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::size_t edges = 0;
    for (auto id : paths[i].nodes) edges += g.out_degree(id);
    total += static_cast<double>(edges) / static_cast<double>(detail::carrier_bits(sentences[i]));
  }
  return total / static_cast<double>(paths.size());
}

inline RateReport rate_report(const KnowledgeGraph& g, std::span<const StegoPath> paths,
                              std::span<const std::string> sentences) {
  RateReport r;
  r.measured_bpw = measured_rate(paths, sentences);
  r.literal_paper_rate = literal_paper_rate(g, paths, sentences);
  r.ratio = r.measured_bpw > 0 ? r.literal_paper_rate / r.measured_bpw : 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    SentenceRate s{paths[i].bits_consumed, detail::carrier_bits(sentences[i]), 0};
    for (auto id : paths[i].nodes) s.edge_count_sum += g.out_degree(id);
    r.per_sentence.push_back(s);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Add-k smoothed n-gram language model
// ---------------------------------------------------------------------------

inline constexpr std::string_view kUnknownToken = "<unk>";

/// p(w | h) = (c(h, w) + k) / (c(h) + k |V|). Contexts are padded with
/// sentence-start markers; the vocabulary is the training word types plus
/// <unk>, to which unseen words map. Sentence end is not predicted, so
/// perplexity covers exactly the words of a sentence.
class LanguageModel {
 public:
  using WordId = std::uint32_t;
  static constexpr WordId kStart = std::numeric_limits<WordId>::max();

  LanguageModel(std::size_t order, double k) : order_(order), k_(k) {
    if (order == 0) throw Error(ErrorCode::InvalidArgument, "n-gram order must be >= 1");
    if (!(k > 0)) throw Error(ErrorCode::InvalidArgument, "smoothing constant must be > 0");
    unk_ = intern(std::string(kUnknownToken));
  }

  void add_sentence(const TokenSequence& tokens) {
    std::vector<WordId> ids;
    for (const auto& t : tokens) ids.push_back(intern(t));
    for (std::size_t j = 0; j < ids.size(); ++j) {
      auto ctx = context(ids, j);
      ++totals_[ctx];
      ++counts_[std::move(ctx)][ids[j]];
    }
  }

  std::size_t order() const { return order_; }
  double smoothing() const { return k_; }
  std::size_t vocabulary_size() const { return words_.size(); }
  const std::vector<std::string>& vocabulary() const { return words_; }

  WordId id(std::string_view word) const {
    auto it = ids_.find(std::string(word));
    return it == ids_.end() ? unk_ : it->second;
  }

  /// p(word | history), history being the preceding words (most recent last).
  double probability(const TokenSequence& history, std::string_view word) const {
    std::vector<WordId> ids;
    for (const auto& t : history) ids.push_back(id(t));
    ids.push_back(id(word));
    return probability_at(ids, ids.size() - 1);
  }

  /// log2 p of every word of the sentence given its prefix.
  std::vector<double> log2_probabilities(const TokenSequence& tokens) const {
    std::vector<WordId> ids;
    for (const auto& t : tokens) ids.push_back(id(t));
    std::vector<double> out;
    for (std::size_t j = 0; j < ids.size(); ++j) out.push_back(std::log2(probability_at(ids, j)));
    return out;
  }

 private:
  WordId intern(const std::string& w) {
    auto [it, fresh] = ids_.emplace(w, static_cast<WordId>(words_.size()));
    if (fresh) words_.push_back(w);
    return it->second;
  }

  std::vector<WordId> context(const std::vector<WordId>& ids, std::size_t j) const {
    std::vector<WordId> ctx;
    for (std::size_t back = order_ - 1; back > 0; --back)
      ctx.push_back(j >= back ? ids[j - back] : kStart);
    return ctx;
  }

  double probability_at(const std::vector<WordId>& ids, std::size_t j) const {
    const auto ctx = context(ids, j);
    double joint = 0, total = 0;
    if (auto t = totals_.find(ctx); t != totals_.end()) {
      total = static_cast<double>(t->second);
      const auto& row = counts_.at(ctx);
      if (auto c = row.find(ids[j]); c != row.end()) joint = static_cast<double>(c->second);
    }
    return (joint + k_) / (total + k_ * static_cast<double>(words_.size()));
  }

  std::size_t order_;
  double k_;
  WordId unk_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
  std::map<std::vector<WordId>, std::map<WordId, std::uint64_t>> counts_;
  std::map<std::vector<WordId>, std::uint64_t> totals_;
};

inline LanguageModel train_lm_tokens(const std::vector<TokenSequence>& corpus,
                                     std::size_t order = 3, double k = 0.01) {
  LanguageModel lm(order, k);
  std::size_t used = 0;
  for (const auto& s : corpus) {
    if (s.empty()) continue;
    lm.add_sentence(s);
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::EmptyCorpus, "no non-empty training sentence");
  return lm;
}

inline LanguageModel train_lm(const std::vector<std::string>& corpus, std::size_t order = 3,
                              double k = 0.01) {
  std::vector<TokenSequence> tokens;
  for (const auto& s : corpus) tokens.push_back(tokenize(s));
  return train_lm_tokens(tokens, order, k);
}

inline double perplexity_tokens(const LanguageModel& lm, const TokenSequence& tokens) {
  if (tokens.empty()) throw Error(ErrorCode::EmptySentence, "sentence has no tokens");
  double sum = 0;
  for (double lp : lm.log2_probabilities(tokens)) sum += lp;
  return std::exp2(-sum / static_cast<double>(tokens.size()));
}

inline double perplexity(const LanguageModel& lm, std::string_view sentence) {
  return perplexity_tokens(lm, tokenize(sentence));
}

// ---------------------------------------------------------------------------
// BLEU and ROUGE-L
// ---------------------------------------------------------------------------

namespace detail {

inline std::map<TokenSequence, std::size_t> ngram_counts(const TokenSequence& t, std::size_t n) {
  std::map<TokenSequence, std::size_t> counts;
  for (std::size_t i = 0; i + n <= t.size(); ++i)
    ++counts[TokenSequence(t.begin() + static_cast<std::ptrdiff_t>(i),
                           t.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return counts;
}

inline std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace detail

/// Sentence BLEU: clipped n-gram precisions for n = 1..max_n, geometric mean
/// with uniform weights, times the brevity penalty against the closest
/// reference length (ties to the shorter).
inline double bleu(std::string_view candidate, std::span<const std::string> references,
                   std::size_t max_n = 4) {
  if (references.empty()) throw Error(ErrorCode::EmptyReference, "no reference sentence");
  if (max_n == 0) throw Error(ErrorCode::InvalidArgument, "max_n must be >= 1");
  const auto cand = tokenize(candidate);
  if (cand.empty()) return 0.0;
  std::vector<TokenSequence> refs;
  for (const auto& r : references) refs.push_back(tokenize(r));

  double log_sum = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const auto counts = detail::ngram_counts(cand, n);
    std::size_t total = 0, clipped = 0;
    for (const auto& [gram, c] : counts) {
      total += c;
      std::size_t best = 0;
      for (const auto& r : refs) {
        const auto rc = detail::ngram_counts(r, n);
        if (auto it = rc.find(gram); it != rc.end()) best = std::max(best, it->second);
      }
      clipped += std::min(c, best);
    }
    if (clipped == 0) return 0.0;
    log_sum += std::log(static_cast<double>(clipped) / static_cast<double>(total));
  }

  std::size_t ref_len = refs.front().size();
  for (const auto& r : refs) {
    const auto d = [&](std::size_t len) {
      return len > cand.size() ? len - cand.size() : cand.size() - len;
    };
    if (d(r.size()) < d(ref_len) || (d(r.size()) == d(ref_len) && r.size() < ref_len))
      ref_len = r.size();
  }
  const double c = static_cast<double>(cand.size());
  const double bp = cand.size() > ref_len ? 1.0 : std::exp(1.0 - static_cast<double>(ref_len) / c);
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

inline double bleu(std::string_view candidate, const std::vector<std::string>& references,
                   std::size_t max_n = 4) {
  return bleu(candidate, std::span<const std::string>(references), max_n);
}

inline constexpr double kRougeBeta = 1.2;

/// LCS F-measure: (1 + b^2) P R / (R + b^2 P), b = 1.2.
inline double rouge_l(std::string_view candidate, std::string_view reference) {
  const auto c = tokenize(candidate);
  const auto r = tokenize(reference);
  if (c.empty() || r.empty()) throw Error(ErrorCode::EmptyInput, "empty sentence");
  const auto lcs = detail::lcs_length(c, r);
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(c.size());
  const double rec = static_cast<double>(lcs) / static_cast<double>(r.size());
  const double b2 = kRougeBeta * kRougeBeta;
  return (1 + b2) * p * rec / (rec + b2 * p);
}

}  // namespace kgstega
