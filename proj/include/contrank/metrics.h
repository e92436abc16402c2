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

#ifndef CONTRANK_METRICS_H_
#define CONTRANK_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace contrank {

struct RankedCandidate {
  std::string doc_id;
  double score = 0.0;
  int label = 0;

  bool operator==(const RankedCandidate&) const = default;
};

// Candidates of one query ordered by (score desc, doc_id asc).
struct RankedList {
  std::string query_id;
  std::vector<RankedCandidate> candidates;

  std::vector<int> Labels() const;
};

// Sorts by score descending; exact ties go to the smaller doc_id.
RankedList RankCandidates(std::string query_id,
                          std::vector<RankedCandidate> candidates);

// Map form. Throws InvalidArgument when the key sets differ.
RankedList RankCandidates(std::string query_id,
                          const std::map<std::string, double>& scores,
                          const std::map<std::string, int>& labels);

// Mean over relevant ranks r of (relevant within top r) / r. nullopt when the
// list has no relevant entry, meaning the query is skipped.
std::optional<double> AveragePrecision(std::span<const int> ranked_labels);

// 1 / rank of the first relevant entry, nullopt when there is none.
std::optional<double> ReciprocalRank(std::span<const int> ranked_labels);

// (relevant within top k) / k.
double PrecisionAt(std::span<const int> ranked_labels, std::size_t k);

struct MetricsReport {
  double map = 0.0;
  double mrr = 0.0;
  std::map<std::size_t, double> p_at_k;
  std::size_t num_queries_evaluated = 0;
  std::size_t num_queries_skipped = 0;

  bool operator==(const MetricsReport&) const = default;
};

struct QueryMetrics {
  std::string query_id;
  bool skipped = false;
  double ap = 0.0;
  double rr = 0.0;
  std::map<std::size_t, double> p_at_k;
};

QueryMetrics ScoreQuery(const RankedList& list, std::span<const std::size_t> ks);

// Means over queries with at least one relevant candidate; the rest are
// counted in num_queries_skipped. Throws InvalidArgument on an empty run or a
// zero cutoff.
MetricsReport Aggregate(std::span<const RankedList> run,
                        std::span<const std::size_t> ks);

// json object {map, mrr, p_at_k: {"k": value}, num_queries_evaluated,
// num_queries_skipped}.
std::string MetricsReportJson(const MetricsReport& report);

// Sentence BLEU over TokenizeText tokens: geometric mean of modified n-gram
// precisions for n = 1..max_n with uniform weights, add-one smoothing on the
// n >= 2 counts, times the brevity penalty. Throws InvalidArgument if either
// side has no tokens.
double Bleu(std::string_view candidate, std::string_view reference,
            int max_n = 4);

}  // namespace contrank

#endif  // CONTRANK_METRICS_H_
