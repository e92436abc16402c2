/*
 * Copyright 2026 The Contrank Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "contrank/encoder.h"

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "contrank/checkpoint.h"
#include "contrank/error.h"
#include "contrank/tokenizer.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace contrank {
namespace {

EncoderConfig SmallConfig(int vocab = 10) {
  EncoderConfig config;
  config.vocab_size = vocab;
  config.embed_dim = 5;
  config.hidden_dim = 4;
  config.output_dim = 3;
  config.max_len = 16;
  config.seed = 42;
  return config;
}

TEST(TokenizeTextTest, Rules) {
  EXPECT_EQ(TokenizeText("What is X?"),
            (std::vector<std::string>{"what", "is", "x", "?"}));
  EXPECT_TRUE(TokenizeText("").empty());
  EXPECT_TRUE(TokenizeText(" \t\n").empty());
  EXPECT_EQ(TokenizeText("don't stop!!"),
            (std::vector<std::string>{"don", "'", "t", "stop", "!", "!"}));
}

TEST(TokenizeTextTest, DeterministicOnRandomStrings) {
  std::mt19937_64 gen(1);
  const std::string alphabet = "abcXYZ .,?!'-\t019";
  for (int trial = 0; trial < 1000; ++trial) {
    std::string text;
    for (int i = 0; i < static_cast<int>(gen() % 30); ++i) {
      text += alphabet[gen() % alphabet.size()];
    }
    EXPECT_EQ(TokenizeText(text), TokenizeText(text));
  }
}

TEST(VocabularyTest, SpecialsAndLookup) {
  Vocabulary empty;
  ASSERT_EQ(empty.size(), 3u);
  EXPECT_EQ(empty.tokens()[Vocabulary::kSep], "[SEP]");
  EXPECT_EQ(empty.Lookup("anything"), Vocabulary::kOov);

  Dataset data;
  data.groups.push_back({"q", "Beta alpha?", {{"d", "gamma alpha", 1}}, {}});
  Vocabulary vocab = Vocabulary::Build(data);
  EXPECT_EQ(vocab.tokens(),
            (std::vector<std::string>{"[PAD]", "[SEP]", "[OOV]", "?", "alpha",
                                      "beta", "gamma"}));
  EXPECT_EQ(vocab.Encode("ALPHA delta ?"),
            (std::vector<TokenId>{4, Vocabulary::kOov, 3}));
  EXPECT_EQ(Vocabulary::FromTokens(vocab.tokens()), vocab);
  EXPECT_THROW(Vocabulary::FromTokens({"a", "b", "c"}), ValidationError);
  EXPECT_THROW(
      Vocabulary::FromTokens({"[PAD]", "[SEP]", "[OOV]", "x", "x"}),
      ValidationError);
}

TEST(EncoderParamsTest, LayoutAndDescribe) {
  EncoderConfig config = SmallConfig();
  EncoderParams params(config);
  const std::size_t expected = 10 * 5 + 4 * 5 + 4 + 3 * 4 + 3 + 3 + 1;
  EXPECT_EQ(params.size(), expected);
  EXPECT_EQ(params.DescribeIndex(0), "embedding[0,0]");
  EXPECT_EQ(params.DescribeIndex(expected - 1), "scorer_bias");
  EXPECT_TRUE(params.AllFinite());
  EncoderParams random = EncoderParams::RandomInit(config);
  for (double v : random.values()) {
    EXPECT_GE(v, -0.1);
    EXPECT_LT(v, 0.1);
  }
  EXPECT_EQ(random, EncoderParams::RandomInit(config));
  config.init_scale = 0.0;
  EXPECT_THROW(config.Validate(), ConfigError);
}

TEST(EncodePairTest, ZeroParamsGiveZeroEmbedding) {
  EncoderParams params(SmallConfig());
  const std::vector<TokenId> q = {3, 4}, d = {5};
  EXPECT_TRUE(EncodePair(params, q, d).isZero(0.0));
}

TEST(EncodePairTest, PureFunction) {
  EncoderParams params = EncoderParams::RandomInit(SmallConfig());
  const std::vector<TokenId> q = {3, 4, 7}, d = {5, 9};
  Embedding a = EncodePair(params, q, d);
  Embedding b = EncodePair(params, q, d);
  ASSERT_EQ(a.size(), 3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(EncodePairTest, MatchesScriptedArithmetic) {
  EncoderConfig config = SmallConfig();
  config.init_scale = 1.0;
  EncoderParams params = EncoderParams::RandomInit(config);
  const TokenId q = 6, d = 8;
  // Input is [q, SEP, d]; mean pool, then tanh layer, then affine layer.
  std::vector<double> pooled(5, 0.0);
  for (TokenId id : {q, Vocabulary::kSep, d}) {
    for (int e = 0; e < 5; ++e) pooled[e] += params.embedding()(id, e) / 3.0;
  }
  std::vector<double> hidden(4);
  for (int h = 0; h < 4; ++h) {
    double z = params.layer1_bias()[h];
    for (int e = 0; e < 5; ++e) z += params.layer1_weight()(h, e) * pooled[e];
    hidden[h] = std::tanh(z);
  }
  const std::vector<TokenId> qs = {q}, ds = {d};
  Embedding got = EncodePair(params, qs, ds);
  double expected_score = params.scorer_bias();
  for (int o = 0; o < 3; ++o) {
    double y = params.layer2_bias()[o];
    for (int h = 0; h < 4; ++h) y += params.layer2_weight()(o, h) * hidden[h];
    EXPECT_NEAR(got[o], y, 1e-12);
    expected_score += params.scorer_weight()[o] * y;
  }
  EXPECT_NEAR(Score(params, got), expected_score, 1e-12);
}

TEST(EncodePairTest, TruncationIgnoresTail) {
  EncoderConfig config = SmallConfig();
  config.max_len = 4;
  EncoderParams params = EncoderParams::RandomInit(config);
  const std::vector<TokenId> q = {3, 4}, d1 = {5, 6, 7}, d2 = {5, 8, 9, 9};
  EXPECT_EQ(PairInput(q, d1, 4), (std::vector<TokenId>{3, 4, 1, 5}));
  Embedding a = EncodePair(params, q, d1);
  Embedding b = EncodePair(params, q, d2);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(EncodePairTest, Errors) {
  EncoderParams params = EncoderParams::RandomInit(SmallConfig());
  const std::vector<TokenId> empty, bad = {10}, ok = {3};
  EXPECT_THROW(EncodePair(params, empty, empty), InvalidArgument);
  EXPECT_THROW(EncodePair(params, bad, ok), InvalidArgument);
  EXPECT_NO_THROW(EncodePair(params, empty, ok));
}

TEST(ScoreTest, Examples) {
  EncoderParams params(SmallConfig());
  params.scorer_bias() = 0.5;
  Embedding e = Eigen::Vector3d(1.0, -2.0, 3.0);
  EXPECT_EQ(Score(params, e), 0.5);
  params.scorer_bias() = 0.0;
  params.scorer_weight()[0] = 1.0;
  EXPECT_EQ(Score(params, e), 1.0);
  EXPECT_THROW(Score(params, Eigen::Vector2d(1, 1)), InvalidArgument);
}

TEST(ScoreTest, MatchesNaiveSummation) {
  EncoderConfig config = SmallConfig();
  config.output_dim = 32;
  config.init_scale = 3.0;
  EncoderParams params = EncoderParams::RandomInit(config);
  std::mt19937_64 gen(4);
  std::normal_distribution<double> n(0.0, 1.0);
  Embedding e(32);
  double expected = params.scorer_bias();
  for (int i = 0; i < 32; ++i) {
    e[i] = n(gen);
    expected += params.scorer_weight()[i] * e[i];
  }
  EXPECT_NEAR(Score(params, e), expected, 1e-12);
}

TEST(BackwardTest, ZeroUpstreamGivesZeroGradient) {
  EncoderParams params = EncoderParams::RandomInit(SmallConfig());
  const std::vector<TokenId> q = {3, 4}, d = {5};
  std::vector<PairActivations> acts = {ForwardPair(params, q, d)};
  std::vector<Embedding> gh = {Embedding::Zero(3)};
  std::vector<double> gs = {0.0};
  ParamGradients grads = Backward(params, acts, gh, gs);
  for (double g : grads.values()) EXPECT_EQ(g, 0.0);
}

TEST(BackwardTest, ScalarChainByHand) {
  EncoderConfig config;
  config.vocab_size = 4;
  config.embed_dim = config.hidden_dim = config.output_dim = 1;
  config.max_len = 8;
  EncoderParams params(config);
  params.embedding()(3, 0) = 0.8;
  params.embedding()(Vocabulary::kSep, 0) = 0.2;
  params.layer1_weight()(0, 0) = 0.5;
  params.layer1_bias()[0] = 0.1;
  params.layer2_weight()(0, 0) = 1.5;
  params.layer2_bias()[0] = -0.3;
  params.scorer_weight()[0] = 2.0;
  const std::vector<TokenId> q = {3}, d;
  std::vector<PairActivations> acts = {ForwardPair(params, q, d)};
  const double x = 0.5;  // (0.8 + 0.2) / 2
  const double a = std::tanh(0.5 * x + 0.1);
  const double h = 1.5 * a - 0.3;
  std::vector<Embedding> gh = {Embedding::Zero(1)};
  std::vector<double> gs = {1.0};
  ParamGradients g = Backward(params, acts, gh, gs);
  const double dz = 2.0 * 1.5 * (1.0 - a * a);
  EXPECT_NEAR(g.scorer_bias(), 1.0, 1e-15);
  EXPECT_NEAR(g.scorer_weight()[0], h, 1e-15);
  EXPECT_NEAR(g.layer2_bias()[0], 2.0, 1e-15);
  EXPECT_NEAR(g.layer2_weight()(0, 0), 2.0 * a, 1e-15);
  EXPECT_NEAR(g.layer1_bias()[0], dz, 1e-15);
  EXPECT_NEAR(g.layer1_weight()(0, 0), dz * x, 1e-15);
  EXPECT_NEAR(g.embedding()(3, 0), dz * 0.5 / 2.0, 1e-15);
  EXPECT_NEAR(g.embedding()(Vocabulary::kSep, 0), dz * 0.5 / 2.0, 1e-15);
  EXPECT_EQ(g.embedding()(0, 0), 0.0);
}

TEST(BackwardTest, ShapeMismatchThrows) {
  EncoderParams params = EncoderParams::RandomInit(SmallConfig());
  const std::vector<TokenId> q = {3};
  std::vector<PairActivations> acts = {ForwardPair(params, q, q)};
  std::vector<Embedding> gh;
  std::vector<double> gs = {1.0};
  EXPECT_THROW(Backward(params, acts, gh, gs), InvalidArgument);
}

TEST(BackwardTest, MatchesFiniteDifferencesOnRandomBatches) {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    EncoderConfig config = SmallConfig(12);
    config.seed = trial;
    config.init_scale = 0.5;
    EncoderParams params = EncoderParams::RandomInit(config);
    std::vector<std::vector<TokenId>> queries, docs;
    std::vector<Embedding> gh;
    std::vector<double> gs;
    for (int p = 0; p < 4; ++p) {
      std::vector<TokenId> q, d;
      for (int i = 0; i < 1 + static_cast<int>(gen() % 4); ++i) q.push_back(3 + gen() % 9);
      for (int i = 0; i < 1 + static_cast<int>(gen() % 6); ++i) d.push_back(3 + gen() % 9);
      queries.push_back(q);
      docs.push_back(d);
      gh.push_back(Eigen::Vector3d(n(gen), n(gen), n(gen)));
      gs.push_back(n(gen));
    }
    // L = sum_i gh_i . h_i + gs_i * s_i, whose gradient is exactly Backward.
    auto loss = [&] {
      double total = 0.0;
      for (int p = 0; p < 4; ++p) {
        Embedding h = EncodePair(params, queries[p], docs[p]);
        total += gh[p].dot(h) + gs[p] * Score(params, h);
      }
      return total;
    };
    std::vector<PairActivations> acts;
    for (int p = 0; p < 4; ++p) acts.push_back(ForwardPair(params, queries[p], docs[p]));
    ParamGradients grads = Backward(params, acts, gh, gs);
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double numeric =
          oracle::CentralDifference(loss, params.values()[i], 1e-4);
      EXPECT_LE(oracle::RelativeError(grads.values()[i], numeric), 1e-3)
          << params.DescribeIndex(i);
    }
  }
}

TEST(CheckpointTest, RoundTripIsExact) {
  Dataset data;
  data.groups.push_back({"q", "alpha beta", {{"d", "gamma", 1}}, {}});
  Vocabulary vocab = Vocabulary::Build(data);
  EncoderConfig config = SmallConfig(static_cast<int>(vocab.size()));
  Checkpoint checkpoint{vocab, EncoderParams::RandomInit(config)};
  std::stringstream buffer;
  WriteCheckpoint(checkpoint, buffer);
  Checkpoint loaded = ReadCheckpoint(buffer);
  EXPECT_EQ(loaded.vocabulary, checkpoint.vocabulary);
  EXPECT_EQ(loaded.params, checkpoint.params);
  EXPECT_EQ(loaded.params.config(), checkpoint.params.config());
}

TEST(CheckpointTest, VocabularyMismatchRejected) {
  Checkpoint checkpoint{Vocabulary(), EncoderParams(SmallConfig(10))};
  EXPECT_THROW(checkpoint.Validate(), ValidationError);
  std::stringstream buffer;
  buffer << R"({"format": "something-else"})";
  EXPECT_THROW(ReadCheckpoint(buffer), Error);
}

}  // namespace
}  // namespace contrank
