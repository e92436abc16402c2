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

#include "contrank/metrics.h"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "contrank/error.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace contrank {
namespace {

RankedList MakeList(const std::string& id, const std::vector<int>& labels) {
  std::vector<RankedCandidate> candidates;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    candidates.push_back({"d" + std::to_string(100 + i),
                          -static_cast<double>(i), labels[i]});
  }
  return RankCandidates(id, std::move(candidates));
}

std::vector<int> RandomLabels(std::mt19937_64& gen, int n) {
  std::vector<int> labels(n);
  for (int& l : labels) l = (gen() % 4 == 0) ? 1 : 0;
  return labels;
}

TEST(RankCandidatesTest, Examples) {
  RankedList list = RankCandidates("q", {{"a", 0.1, 0}, {"b", 0.9, 1}});
  ASSERT_EQ(list.candidates.size(), 2u);
  EXPECT_EQ(list.candidates[0].doc_id, "b");
  RankedList tied = RankCandidates("q", {{"b", 0.5, 0}, {"a", 0.5, 1}});
  EXPECT_EQ(tied.candidates[0].doc_id, "a");
  EXPECT_EQ(tied.Labels(), (std::vector<int>{1, 0}));
}

TEST(RankCandidatesTest, MapFormAndKeyMismatch) {
  RankedList list =
      RankCandidates("q", {{"a", 0.1}, {"b", 0.9}}, {{"a", 1}, {"b", 0}});
  EXPECT_EQ(list.candidates[0].doc_id, "b");
  EXPECT_EQ(list.candidates[1].label, 1);
  EXPECT_THROW(RankCandidates("q", {{"a", 0.1}}, {{"b", 1}}), InvalidArgument);
}

TEST(RankCandidatesTest, MatchesReferenceSort) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> coarse(0, 20);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<RankedCandidate> candidates;
    for (int i = 0; i < 100; ++i) {
      // Coarse scores force plenty of ties.
      candidates.push_back({"doc" + std::to_string(gen() % 100000),
                            coarse(gen) / 4.0, static_cast<int>(gen() % 2)});
    }
    std::vector<RankedCandidate> expected = candidates;
    std::stable_sort(expected.begin(), expected.end(),
                     [](const RankedCandidate& a, const RankedCandidate& b) {
                       if (a.score != b.score) return a.score > b.score;
                       return a.doc_id < b.doc_id;
                     });
    std::shuffle(candidates.begin(), candidates.end(), gen);
    RankedList got = RankCandidates("q", candidates);
    ASSERT_EQ(got.candidates.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(got.candidates[i].doc_id, expected[i].doc_id);
      EXPECT_EQ(got.candidates[i].score, expected[i].score);
    }
  }
}

TEST(AveragePrecisionTest, Examples) {
  const std::vector<int> mixed = {1, 0, 1};
  EXPECT_DOUBLE_EQ(*AveragePrecision(mixed), (1.0 + 2.0 / 3.0) / 2.0);
  const std::vector<int> all = {1, 1, 1, 1};
  EXPECT_EQ(*AveragePrecision(all), 1.0);
  const std::vector<int> none = {0, 0};
  EXPECT_FALSE(AveragePrecision(none));
  EXPECT_FALSE(ReciprocalRank(none));
  const std::vector<int> late = {0, 0, 1};
  EXPECT_DOUBLE_EQ(*ReciprocalRank(late), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(PrecisionAt(late, 3), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(PrecisionAt(late, 5), 1.0 / 5.0);
}

TEST(AveragePrecisionTest, MatchesDefinitionOnRandomLists) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> labels = RandomLabels(gen, 20);
    auto got = AveragePrecision(labels);
    const bool any = std::count(labels.begin(), labels.end(), 1) > 0;
    ASSERT_EQ(got.has_value(), any);
    if (got) EXPECT_NEAR(*got, oracle::AveragePrecision(labels), 1e-12);
  }
}

TEST(AggregateTest, Examples) {
  std::vector<std::size_t> ks = {1};
  std::vector<RankedList> single = {MakeList("q", {1, 0})};
  MetricsReport report = Aggregate(single, ks);
  EXPECT_EQ(report.map, 1.0);
  EXPECT_EQ(report.mrr, 1.0);
  EXPECT_EQ(report.p_at_k.at(1), 1.0);

  std::vector<RankedList> two = {MakeList("a", {1, 0}), MakeList("b", {0, 1}),
                                 MakeList("c", {0, 0})};
  report = Aggregate(two, ks);
  EXPECT_DOUBLE_EQ(report.map, 0.75);
  EXPECT_EQ(report.num_queries_evaluated, 2u);
  EXPECT_EQ(report.num_queries_skipped, 1u);

  std::vector<RankedList> empty;
  EXPECT_THROW(Aggregate(empty, ks), InvalidArgument);
  std::vector<std::size_t> zero = {0};
  EXPECT_THROW(Aggregate(single, zero), InvalidArgument);
}

TEST(AggregateTest, MatchesOracleOnRandomRuns) {
  std::mt19937_64 gen(8);
  std::vector<std::size_t> ks = {1, 3, 5};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<RankedList> run;
    double ap = 0.0, rr = 0.0;
    std::vector<double> p(ks.size(), 0.0);
    int evaluated = 0;
    for (int q = 0; q < 50; ++q) {
      std::vector<int> labels = RandomLabels(gen, 2 + gen() % 15);
      run.push_back(MakeList("q" + std::to_string(q), labels));
      if (std::count(labels.begin(), labels.end(), 1) > 0) {
        ++evaluated;
        ap += oracle::AveragePrecision(labels);
        rr += oracle::ReciprocalRank(labels);
        for (std::size_t i = 0; i < ks.size(); ++i) {
          p[i] += oracle::PrecisionAt(labels, ks[i]);
        }
      }
    }
    MetricsReport report = Aggregate(run, ks);
    ASSERT_EQ(report.num_queries_evaluated, static_cast<std::size_t>(evaluated));
    EXPECT_NEAR(report.map, ap / evaluated, 1e-12);
    EXPECT_NEAR(report.mrr, rr / evaluated, 1e-12);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      EXPECT_NEAR(report.p_at_k.at(ks[i]), p[i] / evaluated, 1e-12);
    }
  }
}

TEST(MetricsPropertyTest, BoundsAndPrecisionAtOneBelowMrr) {
  std::mt19937_64 gen(13);
  std::vector<std::size_t> ks = {1, 10};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RankedList> run;
    for (int q = 0; q < 5; ++q) {
      run.push_back(MakeList("q" + std::to_string(q), RandomLabels(gen, 8)));
    }
    MetricsReport r = Aggregate(run, ks);
    if (r.num_queries_evaluated == 0) continue;
    for (double v : {r.map, r.mrr, r.p_at_k.at(1), r.p_at_k.at(10)}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_LE(r.p_at_k.at(1), r.mrr);
  }
}

TEST(MetricsPropertyTest, PermutationInvariant) {
  std::mt19937_64 gen(17);
  std::vector<RankedCandidate> candidates;
  for (int i = 0; i < 30; ++i) {
    candidates.push_back({"d" + std::to_string(i), 0.01 * i + 0.001 * (i % 7),
                          static_cast<int>(i % 3 == 0)});
  }
  const std::vector<int> reference =
      RankCandidates("q", candidates).Labels();
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(candidates.begin(), candidates.end(), gen);
    EXPECT_EQ(RankCandidates("q", candidates).Labels(), reference);
  }
}

TEST(MetricsPropertyTest, SwappingRelevantUpNeverLowersAp) {
  std::mt19937_64 gen(19);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> labels = RandomLabels(gen, 12);
    if (!AveragePrecision(labels)) continue;
    for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
      if (labels[i] == 0 && labels[i + 1] == 1) {
        std::vector<int> swapped = labels;
        std::swap(swapped[i], swapped[i + 1]);
        EXPECT_GE(*AveragePrecision(swapped), *AveragePrecision(labels));
      }
    }
  }
}

TEST(MetricsReportJsonTest, Fields) {
  std::vector<std::size_t> ks = {1};
  std::vector<RankedList> run = {MakeList("q", {0, 1})};
  const std::string json = MetricsReportJson(Aggregate(run, ks));
  for (const char* key : {"\"map\"", "\"mrr\"", "\"p_at_k\"", "\"1\"",
                          "\"num_queries_evaluated\"",
                          "\"num_queries_skipped\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
}

TEST(BleuTest, SelfBleuIsOne) {
  for (const char* text : {"what is dna", "a", "How do I renew my passport?",
                           "x y x y x y"}) {
    EXPECT_NEAR(Bleu(text, text), 1.0, 1e-12) << text;
  }
}

TEST(BleuTest, GoldenValue) {
  // Frozen from tests/oracles/bleu_golden.py.
  EXPECT_NEAR(Bleu("How do I renew my passport online?",
                   "What is the way to renew a passport online?"),
              0.23939874747073364, 1e-12);
}

TEST(BleuTest, DisjointIsNearZero) {
  EXPECT_LT(Bleu("alpha beta gamma", "one two three four"), 0.05);
}

TEST(BleuTest, EmptyRejected) {
  EXPECT_THROW(Bleu("", "abc"), InvalidArgument);
  EXPECT_THROW(Bleu("abc", "   "), InvalidArgument);
}

}  // namespace
}  // namespace contrank
