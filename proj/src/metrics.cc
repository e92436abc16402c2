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
#include <cmath>

#include "contrank/error.h"
#include "contrank/tokenizer.h"
#include "json.hpp"

namespace contrank {

std::vector<int> RankedList::Labels() const {
  std::vector<int> labels;
  labels.reserve(candidates.size());
  for (const auto& c : candidates) labels.push_back(c.label);
  return labels;
}

RankedList RankCandidates(std::string query_id,
                          std::vector<RankedCandidate> candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const RankedCandidate& a, const RankedCandidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.doc_id < b.doc_id;
            });
  return {std::move(query_id), std::move(candidates)};
}

RankedList RankCandidates(std::string query_id,
                          const std::map<std::string, double>& scores,
                          const std::map<std::string, int>& labels) {
  if (scores.size() != labels.size()) {
    throw InvalidArgument("score and label key sets differ");
  }
  std::vector<RankedCandidate> candidates;
  for (const auto& [doc_id, score] : scores) {
    auto it = labels.find(doc_id);
    if (it == labels.end()) {
      throw InvalidArgument("no label for doc_id '" + doc_id + "'");
    }
    candidates.push_back({doc_id, score, it->second});
  }
  return RankCandidates(std::move(query_id), std::move(candidates));
}

std::optional<double> AveragePrecision(std::span<const int> ranked_labels) {
  double sum = 0.0;
  std::size_t relevant = 0;
  for (std::size_t i = 0; i < ranked_labels.size(); ++i) {
    if (ranked_labels[i] > 0) {
      ++relevant;
      sum += static_cast<double>(relevant) / static_cast<double>(i + 1);
    }
  }
  if (relevant == 0) return std::nullopt;
  return sum / static_cast<double>(relevant);
}

std::optional<double> ReciprocalRank(std::span<const int> ranked_labels) {
  for (std::size_t i = 0; i < ranked_labels.size(); ++i) {
    if (ranked_labels[i] > 0) return 1.0 / static_cast<double>(i + 1);
  }
  return std::nullopt;
}

double PrecisionAt(std::span<const int> ranked_labels, std::size_t k) {
  if (k == 0) throw InvalidArgument("precision cutoff must be >= 1");
  const std::size_t depth = std::min(k, ranked_labels.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) hits += ranked_labels[i] > 0;
  return static_cast<double>(hits) / static_cast<double>(k);
}

QueryMetrics ScoreQuery(const RankedList& list,
                        std::span<const std::size_t> ks) {
  const std::vector<int> labels = list.Labels();
  QueryMetrics out;
  out.query_id = list.query_id;
  std::optional<double> ap = AveragePrecision(labels);
  if (!ap) {
    out.skipped = true;
    return out;
  }
  out.ap = *ap;
  out.rr = *ReciprocalRank(labels);
  for (std::size_t k : ks) out.p_at_k[k] = PrecisionAt(labels, k);
  return out;
}

MetricsReport Aggregate(std::span<const RankedList> run,
                        std::span<const std::size_t> ks) {
  if (run.empty()) throw InvalidArgument("empty run");
  MetricsReport report;
  for (std::size_t k : ks) {
    if (k == 0) throw InvalidArgument("precision cutoff must be >= 1");
    report.p_at_k[k] = 0.0;
  }
  for (const RankedList& list : run) {
    QueryMetrics q = ScoreQuery(list, ks);
    if (q.skipped) {
      ++report.num_queries_skipped;
      continue;
    }
    ++report.num_queries_evaluated;
    report.map += q.ap;
    report.mrr += q.rr;
    for (const auto& [k, value] : q.p_at_k) report.p_at_k[k] += value;
  }
  if (report.num_queries_evaluated > 0) {
    const auto n = static_cast<double>(report.num_queries_evaluated);
    report.map /= n;
    report.mrr /= n;
    for (auto& [k, value] : report.p_at_k) value /= n;
  }
  return report;
}

std::string MetricsReportJson(const MetricsReport& report) {
  nlohmann::ordered_json doc;
  doc["map"] = report.map;
  doc["mrr"] = report.mrr;
  nlohmann::ordered_json p_at_k = nlohmann::ordered_json::object();
  for (const auto& [k, value] : report.p_at_k) {
    p_at_k[std::to_string(k)] = value;
  }
  doc["p_at_k"] = p_at_k;
  doc["num_queries_evaluated"] = report.num_queries_evaluated;
  doc["num_queries_skipped"] = report.num_queries_skipped;
  return doc.dump(2);
}

namespace {

using NGramCounts = std::map<std::vector<std::string>, std::size_t>;

NGramCounts CountNGrams(const std::vector<std::string>& tokens,
                        std::size_t n) {
  NGramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i,
                                      tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace

double Bleu(std::string_view candidate, std::string_view reference,
            int max_n) {
  if (max_n < 1) throw InvalidArgument("max_n must be >= 1");
  const std::vector<std::string> cand = TokenizeText(candidate);
  const std::vector<std::string> ref = TokenizeText(reference);
  if (cand.empty() || ref.empty()) {
    throw InvalidArgument("BLEU needs non-empty candidate and reference");
  }
  double log_precision = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const NGramCounts cand_counts = CountNGrams(cand, n);
    const NGramCounts ref_counts = CountNGrams(ref, n);
    double matched = 0.0;
    double total = 0.0;
    for (const auto& [gram, count] : cand_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) {
        matched += static_cast<double>(std::min(count, it->second));
      }
      total += static_cast<double>(count);
    }
    if (n >= 2) {
      matched += 1.0;
      total += 1.0;
    }
    if (matched == 0.0) return 0.0;
    log_precision += std::log(matched / total) / max_n;
  }
  const auto c = static_cast<double>(cand.size());
  const auto r = static_cast<double>(ref.size());
  const double brevity = c > r ? 1.0 : std::exp(1.0 - r / c);
  return brevity * std::exp(log_precision);
}

}  // namespace contrank
