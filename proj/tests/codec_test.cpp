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

#include <algorithm>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "kgstega/bits.hpp"
#include "kgstega/codec.hpp"
#include "kgstega/huffman.hpp"
#include "kgstega/prf.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace kgstega {
namespace {

using testing::demo_graph;
using testing::demo_key;
using testing::demo_pin_configs;
using testing::graph_from;
using testing::id_of;
using testing::ids_of;

std::multiset<std::size_t> length_multiset(const EdgeCodebook& b) {
  const auto l = b.lengths();
  return {l.begin(), l.end()};
}

// ---------------------------------------------------------------------------
// Bits and framing

TEST(Payload, BytesAreMsbFirst) {
  const auto p = Payload::from_bytes(std::string("\xA5\x01", 2));
  EXPECT_EQ(to_string(p.bits()), "1010010100000001");
  EXPECT_EQ(p.to_bytes(), (std::vector<std::uint8_t>{0xA5, 0x01}));
}

TEST(Payload, FrameHasBigEndianLengthHeader) {
  const auto p = Payload::from_bytes(std::string("\xFF", 1));
  EXPECT_EQ(to_string(p.frame()), "0000000000001000" "11111111");
  EXPECT_EQ(Payload::unframe(p.frame()), p);
  EXPECT_EQ(Payload().frame(), Bits(16, false));
}

TEST(Payload, Limits) {
  EXPECT_NO_THROW(Payload(Bits(kMaxPayloadBits)));
  EXPECT_KG_ERROR(Payload(Bits(kMaxPayloadBits + 1)), ErrorCode::PayloadTooLong);
  EXPECT_KG_ERROR(Payload::unframe(Bits(10)), ErrorCode::TruncatedStream);
  auto frame = Payload(bits_from_string("1011")).frame();
  frame.pop_back();
  EXPECT_KG_ERROR(Payload::unframe(frame), ErrorCode::TruncatedStream);
}

TEST(BitCursor, PaddingIsNotCounted) {
  const Bits b = bits_from_string("1");
  BitCursor c(b);
  EXPECT_TRUE(c.next());
  EXPECT_FALSE(c.next());
  EXPECT_FALSE(c.next());
  EXPECT_EQ(c.position(), 1u);
  EXPECT_EQ(c.padding_emitted(), 2u);
}

// ---------------------------------------------------------------------------
// Keyed PRF, against an independent HMAC-SHA256 computation

TEST(FlipPrf, MatchesReferenceHmac) {
  const FlipPrf prf(testing::kDemoSecret);
  std::string edge, start, negative;
  for (int owner = 1; owner <= 8; ++owner)
    for (std::uint32_t i = 0; i < 4; ++i) edge += prf.bit(kEdgeFlipTag, owner, i) ? '1' : '0';
  for (std::uint32_t i = 0; i < 16; ++i) start += prf.bit(kStartFlipTag, 0, i) ? '1' : '0';
  for (std::uint32_t i = 0; i < 8; ++i) negative += prf.bit(kEdgeFlipTag, -5, i) ? '1' : '0';
  EXPECT_EQ(edge, "01010000001110011011010110010011");
  EXPECT_EQ(start, "0010011011001111");
  EXPECT_EQ(negative, "01100011");
  EXPECT_TRUE(prf.bit(kEdgeFlipTag, 123456789012, 7));
}

// ---------------------------------------------------------------------------
// Huffman construction

std::vector<CodeSymbol> symbols_for(const std::vector<std::uint64_t>& weights) {
  std::vector<CodeSymbol> s;
  for (std::size_t i = 0; i < weights.size(); ++i)
    s.push_back({static_cast<NodeId>(i + 1), "s" + std::to_string(i), weights[i]});
  return s;
}

TEST(PrefixCode, TieBreakRule) {
  // Merge bad+noisy (equal weight; bad has the smaller label, takes 0), then
  // {bad,noisy}+good (equal weight 2; the subtree holding "bad" takes 0).
  const auto code = PrefixCode::build({{5, "good", 2}, {6, "bad", 1}, {7, "noisy", 1}}, nullptr);
  EXPECT_EQ(to_string(code.codeword(0)), "1");
  EXPECT_EQ(to_string(code.codeword(1)), "00");
  EXPECT_EQ(to_string(code.codeword(2)), "01");
  // Heavier subtree takes 0.
  const auto car = PrefixCode::build({{3, "engine", 4}, {4, "seat", 1}}, nullptr);
  EXPECT_EQ(to_string(car.codeword(0)), "0");
  EXPECT_EQ(to_string(car.codeword(1)), "1");
}

TEST(PrefixCode, SingletonHasEmptyCodeword) {
  const auto code = PrefixCode::build({{1, "x", 3}}, nullptr);
  EXPECT_TRUE(code.codeword(0).empty());
  const Bits none;
  BitCursor c(none);
  EXPECT_EQ(code.decode(c), 0u);
  EXPECT_EQ(c.padding_emitted(), 0u);
}

TEST(PrefixCode, RejectsBadInput) {
  EXPECT_KG_ERROR(PrefixCode::build({}, nullptr), ErrorCode::InvalidArgument);
  EXPECT_KG_ERROR(PrefixCode::build({{1, "a", 0}}, nullptr), ErrorCode::NonPositiveWeight);
  EXPECT_KG_ERROR(PrefixCode::build({{1, "a", UINT64_MAX}, {2, "b", 2}}, nullptr),
                  ErrorCode::WeightOverflow);
}

TEST(PrefixCode, OptimalPrefixFreeCompleteAgainstOracle) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> wd(1, 20);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + trial % 8;
    std::vector<std::uint64_t> w(n);
    for (auto& x : w) x = trial % 5 == 0 ? 1 + x % 2 : wd(rng);  // many ties every fifth trial
    std::vector<bool> flips(n);
    for (std::size_t i = 0; i < n; ++i) flips[i] = coin(rng);
    const auto code = PrefixCode::build(symbols_for(w), [&](std::uint32_t i) { return flips[i]; });
    EXPECT_EQ(code.weighted_length(), oracle::optimal_weighted_length(w));
    EXPECT_TRUE(oracle::prefix_free(code.codewords()));
    if (n > 1) {
      EXPECT_TRUE(oracle::kraft_equals_one(code.lengths()));
    }
    // Decoding each codeword returns its symbol.
    for (std::size_t i = 0; i < n; ++i) {
      BitCursor c(code.codeword(i));
      EXPECT_EQ(code.decode(c), i);
      EXPECT_TRUE(c.exhausted());
      EXPECT_EQ(c.padding_emitted(), 0u);
    }
  }
}

TEST(PrefixCode, FlipsChangeValuesNotLengths) {
  const auto w = std::vector<std::uint64_t>{5, 3, 3, 2, 1, 1};
  const auto plain = PrefixCode::build(symbols_for(w), nullptr);
  const auto all = PrefixCode::build(symbols_for(w), [](std::uint32_t) { return true; });
  EXPECT_EQ(plain.lengths(), all.lengths());
  EXPECT_NE(plain.codewords(), all.codewords());
}

// ---------------------------------------------------------------------------
// Codebooks

TEST(BuildCodebook, DemoExamples) {
  const auto g = demo_graph();
  const auto car = build_codebook(g, id_of(g, "car"), demo_key());
  EXPECT_EQ(car.codeword(id_of(g, "engine"))->size(), 1u);
  EXPECT_EQ(car.codeword(id_of(g, "seat"))->size(), 1u);
  const auto engine = build_codebook(g, id_of(g, "engine"), demo_key());
  EXPECT_EQ(length_multiset(engine), (std::multiset<std::size_t>{1, 2, 2}));
  EXPECT_EQ(engine.code.weighted_length(), 6u);
  EXPECT_EQ(engine.codeword(id_of(g, "good"))->size(), 1u);
  EXPECT_KG_ERROR(build_codebook(g, id_of(g, "good"), demo_key()), ErrorCode::NoViableEdges);
  EXPECT_KG_ERROR(build_codebook(g, 42, demo_key()), ErrorCode::UnknownNode);
}

TEST(StartCodebook, DemoExamples) {
  const auto g = demo_graph();
  const auto start = start_codebook(g, demo_key());
  EXPECT_TRUE(start.start);
  EXPECT_EQ(start.codeword(id_of(g, "car"))->size(), 1u);
  EXPECT_EQ(start.codeword(id_of(g, "truck"))->size(), 1u);
  std::map<NodeId, std::uint64_t> weights;
  for (const auto& s : start.code.symbols()) weights[s.id] = s.weight;
  EXPECT_EQ(weights, (std::map<NodeId, std::uint64_t>{{1, 5}, {2, 2}}));

  const auto chain = graph_from("1\tcar\t1\n2\tengine\t2\n", "1\thas\t2\n");
  EXPECT_TRUE(start_codebook(chain, demo_key()).codeword(1)->empty());

  const auto pinned = start_codebook(g, demo_key({{1, "car"}}));
  EXPECT_TRUE(pinned.pinned);
  EXPECT_TRUE(pinned.codeword(id_of(g, "car"))->empty());
}

TEST(Codebooks, KeyIndependentLengthsKeyDependentValues) {
  const auto g = demo_graph();
  std::mt19937_64 rng(17);
  const PathCodec base(g, demo_key());
  bool any_value_differs = false;
  for (int k = 0; k < 20; ++k) {
    const PathCodec other(g, StegoKey{oracle::random_secret(rng), {}});
    EXPECT_EQ(length_multiset(other.start_codebook()), length_multiset(base.start_codebook()));
    for (const auto& n : g.nodes()) {
      if (n.level == g.depth()) continue;
      EXPECT_EQ(length_multiset(other.codebook(n.id)), length_multiset(base.codebook(n.id)));
      any_value_differs = any_value_differs ||
                          other.codebook(n.id).entries() != base.codebook(n.id).entries();
    }
  }
  EXPECT_TRUE(any_value_differs);
}

TEST(Codebooks, PinRestrictsToDestinationsReachingThePin) {
  const auto g = demo_graph();
  const PathCodec codec(g, demo_key({{3, "bad"}}));
  // car: only engine reaches "bad"; the hop becomes a forced single choice.
  EXPECT_EQ(codec.codebook(id_of(g, "car")).code.size(), 1u);
  EXPECT_FALSE(codec.codebook(id_of(g, "car")).pinned);
  EXPECT_TRUE(codec.codebook(id_of(g, "engine")).pinned);
  EXPECT_EQ(codec.start_codebook().code.size(), 2u);
}

TEST(Codebooks, InvalidKeys) {
  const auto g = demo_graph();
  EXPECT_KG_ERROR(PathCodec(g, StegoKey{"short", {}}), ErrorCode::InvalidKey);
  EXPECT_KG_ERROR(PathCodec(g, demo_key({{1, "car"}, {1, "truck"}})), ErrorCode::InvalidPin);
  EXPECT_KG_ERROR(PathCodec(g, demo_key({{2, "wheel"}})), ErrorCode::PinUnreachable);
  EXPECT_KG_ERROR(PathCodec(g, demo_key({{1, "engine"}})), ErrorCode::PinUnreachable);
  EXPECT_KG_ERROR(parse_pin("car"), ErrorCode::InvalidPin);
  EXPECT_KG_ERROR(parse_pin("0:car"), ErrorCode::InvalidPin);
  EXPECT_EQ(parse_pin("2:fuel consumption"), (Pin{2, "fuel consumption"}));
}

TEST(Codebooks, UnreachablePinFailsWhenWalked) {
  // truck has no edge to seat, and nothing else reaches it from truck.
  const auto g = demo_graph();
  const PathCodec codec(g, demo_key({{1, "truck"}, {2, "seat"}}));
  const Bits none;
  BitCursor c(none);
  EXPECT_KG_ERROR(codec.embed_path(c), ErrorCode::PinUnreachable);
}

// ---------------------------------------------------------------------------
// Path embedding and extraction

std::size_t code_length_along(const PathCodec& codec, const StegoPath& p) {
  std::size_t total = codec.start_codebook().codeword(p.nodes[0])->size();
  for (std::size_t k = 1; k < p.nodes.size(); ++k)
    total += codec.codebook(p.nodes[k - 1]).codeword(p.nodes[k])->size();
  return total;
}

TEST(EmbedPath, DemoZeros) {
  const auto g = demo_graph();
  const PathCodec codec(g, demo_key());
  const Bits zeros(64, false);
  BitCursor c(zeros);
  const auto p = codec.embed_path(c);
  EXPECT_EQ(g.node(p.nodes.back()).level, 3);
  EXPECT_EQ(p.bits_consumed, code_length_along(codec, p));
  EXPECT_GE(p.bits_consumed, 2u);
  EXPECT_LE(p.bits_consumed, 4u);
  if (p.nodes[0] == id_of(g, "car") && p.nodes[1] == id_of(g, "engine")) {
    EXPECT_TRUE(p.bits_consumed == 3 || p.bits_consumed == 4);
  }
}

TEST(EmbedPath, DemoTwoPins) {
  const auto g = demo_graph();
  const PathCodec codec(g, demo_key({{1, "car"}, {2, "engine"}}));
  for (const char* input : {"0", "1", "00", "01", "10", "11"}) {
    const Bits b = bits_from_string(input);
    BitCursor c(b);
    const auto p = codec.embed_path(c);
    EXPECT_EQ(std::vector<NodeId>(p.nodes.begin(), p.nodes.begin() + 2), ids_of(g, {"car", "engine"}));
    EXPECT_EQ(p.pinned_hops, (std::vector<std::size_t>{0, 1}));
    EXPECT_GE(p.bits_consumed, 1u);
    EXPECT_LE(p.bits_consumed, 2u);
  }
}

TEST(EmbedPath, EmptyCursorSelectsByPadding) {
  const auto g = demo_graph();
  const PathCodec codec(g, demo_key());
  const Bits none;
  BitCursor c(none);
  const auto p = codec.embed_path(c);
  EXPECT_EQ(p.bits_consumed, 0u);
  EXPECT_EQ(c.padding_emitted(), code_length_along(codec, p));
  EXPECT_EQ(p.nodes.size(), 3u);
}

TEST(ExtractPath, CensusIsBijectiveForEveryPinConfig) {
  const auto g = demo_graph();
  for (const auto& pins : demo_pin_configs()) {
    const PathCodec codec(g, demo_key(pins));
    const std::size_t width = codec.capacity().max_bits;
    const auto census = oracle::path_census(codec, width);
    std::uint64_t total = 0;
    std::vector<Bits> words;
    for (const auto& [nodes, count] : census) {
      StegoPath p{nodes, 0, codec.pinned_hops(nodes)};
      const auto bits = codec.extract_path(p);
      words.push_back(bits);
      EXPECT_EQ(count, std::uint64_t{1} << (width - bits.size()));
      total += count;
      // Replaying the extracted bits yields the same path with no padding.
      BitCursor c(bits);
      const auto again = codec.embed_path(c);
      EXPECT_EQ(again.nodes, nodes);
      EXPECT_EQ(again.bits_consumed, bits.size());
      EXPECT_EQ(c.padding_emitted(), 0u);
    }
    EXPECT_EQ(total, std::uint64_t{1} << width);
    EXPECT_TRUE(oracle::prefix_free(words));
    EXPECT_EQ(census.size(), codec.capacity().path_count);
  }
}

TEST(ExtractPath, PinnedOnlyPathIsEmpty) {
  const auto g = demo_graph();
  const PathCodec codec(g, demo_key({{1, "car"}, {2, "engine"}, {3, "good"}}));
  const Bits none;
  BitCursor c(none);
  const auto p = codec.embed_path(c);
  EXPECT_EQ(p.nodes, ids_of(g, {"car", "engine", "good"}));
  EXPECT_TRUE(codec.extract_path(p).empty());
  EXPECT_EQ(p.pinned_hops, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(ExtractPath, Errors) {
  const auto g = demo_graph();
  const PathCodec codec(g, demo_key());
  EXPECT_KG_ERROR(codec.extract_path({ids_of(g, {"car", "good"}), 0, {}}), ErrorCode::EdgeNotInGraph);
  EXPECT_KG_ERROR(codec.extract_path({ids_of(g, {"car", "engine"}), 0, {}}), ErrorCode::IncompletePath);
  EXPECT_KG_ERROR(codec.extract_path({{}, 0, {}}), ErrorCode::IncompletePath);
  const PathCodec pinned(g, demo_key({{1, "car"}}));
  EXPECT_KG_ERROR(pinned.extract_path({ids_of(g, {"truck", "engine", "good"}), 0, {}}),
                  ErrorCode::PinMismatch);
  const PathCodec restricted(g, demo_key({{3, "bad"}}));
  EXPECT_KG_ERROR(restricted.extract_path({ids_of(g, {"car", "seat", "good"}), 0, {}}),
                  ErrorCode::PinMismatch);
}

TEST(ExtractPath, OtherKeySameLengthsDifferentBits) {
  const auto g = demo_graph();
  const PathCodec a(g, demo_key());
  std::mt19937_64 rng(23);
  std::size_t differing = 0;
  for (int k = 0; k < 50; ++k) {
    const PathCodec b(g, StegoKey{oracle::random_secret(rng), {}});
    for (const auto& p : complete_paths(g)) {
      EXPECT_EQ(a.extract_path(p).size(), b.extract_path(p).size());
      differing += a.extract_path(p) != b.extract_path(p);
    }
  }
  EXPECT_GT(differing, 0u);
}

// ---------------------------------------------------------------------------
// Messages

TEST(EmbedMessage, EmptyPayloadCarriesOnlyTheHeader) {
  const auto g = demo_graph();
  const PathCodec codec(g, demo_key());
  const auto paths = codec.embed_message(Payload());
  std::size_t total = 0;
  for (const auto& p : paths) total += p.bits_consumed;
  EXPECT_EQ(total, 16u);
  // Zero bits select the same path every time the walk starts fresh.
  for (std::size_t i = 0; i + 1 < paths.size(); ++i) EXPECT_EQ(paths[i].nodes, paths[0].nodes);
  const auto per_path = paths[0].bits_consumed;
  EXPECT_EQ(paths.size(), (16 + per_path - 1) / per_path);
  EXPECT_EQ(codec.extract_message(paths), Payload());
}

TEST(EmbedMessage, OneBytePayload) {
  const auto g = demo_graph();
  const PathCodec codec(g, demo_key());
  const auto m = Payload::from_bytes(std::string("\xFF", 1));
  const auto paths = codec.embed_message(m);
  std::size_t total = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    total += paths[i].bits_consumed;
    if (i + 1 < paths.size()) {
      EXPECT_LT(total, 24u);
    }
  }
  EXPECT_EQ(total, 24u);
  EXPECT_EQ(codec.extract_message(paths), m);
}

TEST(EmbedMessage, RoundTripExhaustiveAllPinConfigs) {
  const auto g = demo_graph();
  for (const auto& pins : demo_pin_configs()) {
    const PathCodec codec(g, demo_key(pins));
    for (std::size_t len = 0; len <= 12; ++len)
      for (std::uint64_t v = 0; v < (1u << len); ++v) {
        const Payload m(oracle::bits_of(v, len));
        const auto paths = codec.embed_message(m);
        ASSERT_EQ(codec.extract_message(paths), m) << len << ":" << v;
        for (const auto& p : paths)
          for (std::size_t k = 1; k < p.nodes.size(); ++k)
            ASSERT_LT(g.node(p.nodes[k - 1]).level, g.node(p.nodes[k]).level);
      }
  }
}

TEST(EmbedMessage, RoundTripOnRandomGraphs) {
  std::mt19937_64 rng(29);
  int graphs = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = oracle::random_leveled_graph(rng, 2 + trial % 3, 1, 6, 0.4, 0.15, 12);
    std::unique_ptr<PathCodec> codec;
    try {
      codec = std::make_unique<PathCodec>(g, StegoKey{oracle::random_secret(rng), {}});
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::EmptyViableGraph);
      continue;
    }
    if (codec->capacity().max_bits == 0) {
      EXPECT_KG_ERROR(codec->embed_message(Payload()), ErrorCode::ZeroCapacity);
      continue;
    }
    ++graphs;
    for (int m = 0; m < 20; ++m) {
      Bits b(rng() % 200);
      for (std::size_t i = 0; i < b.size(); ++i) b[i] = rng() & 1;
      const Payload payload(b);
      ASSERT_EQ(codec->extract_message(codec->embed_message(payload)), payload);
    }
  }
  EXPECT_GT(graphs, 30);
}

TEST(ExtractMessage, ReorderedPathsDoNotDecode) {
  const auto g = demo_graph();
  const PathCodec codec(g, demo_key());
  const auto m = Payload::from_bytes(std::string("attack at dawn"));
  auto paths = codec.embed_message(m);
  ASSERT_GT(paths.size(), 3u);
  // Swap the first two paths that differ.
  std::size_t j = 1;
  while (paths[j].nodes == paths[0].nodes) ++j;
  std::swap(paths[0], paths[j]);
  try {
    EXPECT_NE(codec.extract_message(paths), m);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TruncatedStream);
  }
}

TEST(ExtractMessage, DroppedPathIsTruncated) {
  const auto g = demo_graph();
  const PathCodec codec(g, demo_key());
  const auto m = Payload::from_bytes(std::string("hello"));
  auto paths = codec.embed_message(m);
  paths.pop_back();
  EXPECT_KG_ERROR(codec.extract_message(paths), ErrorCode::TruncatedStream);
}

TEST(ExtractMessage, WrongKeyMisdecodes) {
  // The demo has four key-dependent branches (start, car, two at engine), so
  // a random key reproduces every flip with probability 1/16 and otherwise
  // changes the decoded bits. Expected mismatches: about 94 of 100.
  const auto g = demo_graph();
  const PathCodec codec(g, demo_key());
  const auto m = Payload::from_bytes(std::string("covert"));
  const auto paths = codec.embed_message(m);
  std::mt19937_64 rng(31);
  int mismatches = 0;
  for (int k = 0; k < 100; ++k) {
    const PathCodec wrong(g, StegoKey{oracle::random_secret(rng), {}});
    try {
      mismatches += wrong.extract_message(paths) != m;
    } catch (const Error&) {
      ++mismatches;
    }
  }
  EXPECT_GE(mismatches, 80);
}

// ---------------------------------------------------------------------------
// Capacity

TEST(Capacity, Demo) {
  const auto g = demo_graph();
  const auto none = capacity_report(g, demo_key());
  EXPECT_EQ(none.min_bits, 2u);  // truck -> engine -> good: 1 + 0 + 1
  EXPECT_EQ(none.max_bits, 4u);  // car -> engine -> bad: 1 + 1 + 2
  EXPECT_EQ(none.path_count, 7u);
  // Expected bits: start always 1; car (5/7) adds 1 + (4/5)(1.5); truck (2/7) adds 1.5.
  EXPECT_NEAR(none.expected_bits, 1 + 5.0 / 7 * (1 + 0.8 * 1.5) + 2.0 / 7 * 1.5, 1e-12);
  EXPECT_FALSE(none.degenerate);

  const auto two = capacity_report(g, demo_key({{1, "car"}, {2, "engine"}}));
  EXPECT_EQ(two.min_bits, 1u);
  EXPECT_EQ(two.max_bits, 2u);

  const auto chain = capacity_report(graph_from("1\ta\t1\n2\tb\t2\n3\tc\t3\n", "1\tr\t2\n2\tr\t3\n"),
                                     demo_key());
  EXPECT_EQ(chain.max_bits, 0u);
  EXPECT_TRUE(chain.degenerate);
}

TEST(Capacity, PinsNeverIncreaseMaximum) {
  const auto g = demo_graph();
  const std::vector<Pin> all{{1, "car"}, {1, "truck"}, {2, "engine"}, {2, "seat"},
                             {3, "good"}, {3, "bad"},   {3, "noisy"}};
  auto max_for = [&](const std::vector<Pin>& pins) -> std::optional<std::size_t> {
    try {
      return capacity_report(g, demo_key(pins)).max_bits;
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  // Every valid pin set, against every valid subset obtained by dropping one pin.
  for (std::uint32_t mask = 1; mask < (1u << all.size()); ++mask) {
    std::vector<Pin> pins;
    std::set<int> levels;
    bool ok = true;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask >> i & 1) {
        ok = ok && levels.insert(all[i].level).second;
        pins.push_back(all[i]);
      }
    if (!ok) continue;
    const auto with = max_for(pins);
    if (!with) continue;
    for (std::size_t drop = 0; drop < pins.size(); ++drop) {
      auto fewer = pins;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(drop));
      const auto without = max_for(fewer);
      ASSERT_TRUE(without.has_value());
      EXPECT_LE(*with, *without);
    }
  }
}

TEST(Capacity, MatchesCensusOnRandomGraphs) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_leveled_graph(rng, 3, 1, 4, 0.5, 0.1, 6);
    std::unique_ptr<PathCodec> codec;
    try {
      codec = std::make_unique<PathCodec>(g, StegoKey{oracle::random_secret(rng), {}});
    } catch (const Error&) {
      continue;
    }
    std::size_t lo = SIZE_MAX, hi = 0;
    for (const auto& p : complete_paths(codec->graph())) {
      const auto len = codec->extract_path(p).size();
      lo = std::min(lo, len);
      hi = std::max(hi, len);
    }
    EXPECT_EQ(codec->capacity().min_bits, lo);
    EXPECT_EQ(codec->capacity().max_bits, hi);
    EXPECT_EQ(codec->capacity().path_count, complete_paths(codec->graph()).size());
  }
}

}  // namespace
}  // namespace kgstega
