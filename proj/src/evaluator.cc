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

#include "contrank/evaluator.h"

#include <cstdio>
#include <ostream>

#include "contrank/error.h"

namespace contrank {
namespace {

std::string FormatDouble(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

EvaluationResult EvaluateModel(const Vocabulary& vocabulary,
                               const EncoderParams& params,
                               const Dataset& dataset,
                               std::span<const std::size_t> ks) {
  std::vector<RankedList> run;
  run.reserve(dataset.groups.size());
  for (const QueryGroup& group : dataset.groups) {
    const std::vector<TokenId> query = vocabulary.Encode(group.query_text);
    std::vector<RankedCandidate> scored;
    scored.reserve(group.candidates.size());
    for (const Candidate& candidate : group.candidates) {
      const std::vector<TokenId> doc = vocabulary.Encode(candidate.text);
      scored.push_back({candidate.doc_id,
                        Score(params, EncodePair(params, query, doc)),
                        candidate.label});
    }
    run.push_back(RankCandidates(group.query_id, std::move(scored)));
  }
  EvaluationResult result;
  result.report = Aggregate(run, ks);
  result.per_query.reserve(run.size());
  for (const RankedList& list : run) {
    result.per_query.push_back(ScoreQuery(list, ks));
  }
  return result;
}

EvaluationResult Evaluate(const Checkpoint& checkpoint, const Dataset& dataset,
                          std::span<const std::size_t> ks) {
  checkpoint.Validate();
  return EvaluateModel(checkpoint.vocabulary, checkpoint.params, dataset, ks);
}

void WritePerQueryTsv(const EvaluationResult& result,
                      std::span<const std::size_t> ks, std::ostream& out) {
  out << "query_id\tskipped\tap\trr";
  for (std::size_t k : ks) out << "\tp_at_" << k;
  out << '\n';
  for (const QueryMetrics& q : result.per_query) {
    out << q.query_id << '\t' << (q.skipped ? 1 : 0) << '\t'
        << FormatDouble(q.ap) << '\t' << FormatDouble(q.rr);
    for (std::size_t k : ks) {
      auto it = q.p_at_k.find(k);
      out << '\t' << FormatDouble(it == q.p_at_k.end() ? 0.0 : it->second);
    }
    out << '\n';
  }
}

std::vector<PairEmbedding> EmbedDataset(const Checkpoint& checkpoint,
                                        const Dataset& dataset) {
  checkpoint.Validate();
  std::vector<PairEmbedding> out;
  for (const QueryGroup& group : dataset.groups) {
    const std::vector<TokenId> query =
        checkpoint.vocabulary.Encode(group.query_text);
    for (const Candidate& candidate : group.candidates) {
      out.push_back({group.query_id, candidate.doc_id, candidate.label,
                     EncodePair(checkpoint.params, query,
                                checkpoint.vocabulary.Encode(candidate.text))});
    }
  }
  return out;
}

void WriteEmbeddingsTsv(const Checkpoint& checkpoint, const Dataset& dataset,
                        std::ostream& out) {
  const std::vector<PairEmbedding> rows = EmbedDataset(checkpoint, dataset);
  out << "query_id\tdoc_id\tlabel";
  for (int i = 0; i < checkpoint.params.config().output_dim; ++i) {
    out << "\te" << i;
  }
  out << '\n';
  for (const PairEmbedding& row : rows) {
    out << row.query_id << '\t' << row.doc_id << '\t' << row.label;
    for (double v : row.vector) out << '\t' << FormatDouble(v);
    out << '\n';
  }
}

}  // namespace contrank
