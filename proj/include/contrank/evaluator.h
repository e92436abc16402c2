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

#ifndef CONTRANK_EVALUATOR_H_
#define CONTRANK_EVALUATOR_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "contrank/checkpoint.h"
#include "contrank/corpus.h"
#include "contrank/encoder.h"
#include "contrank/metrics.h"
#include "contrank/tokenizer.h"

namespace contrank {

struct EvaluationResult {
  MetricsReport report;
  std::vector<QueryMetrics> per_query;
};

// Scores every candidate of every group, ranks with the doc_id tie-break and
// aggregates. Throws InvalidArgument on an empty dataset.
EvaluationResult EvaluateModel(const Vocabulary& vocabulary,
                               const EncoderParams& params,
                               const Dataset& dataset,
                               std::span<const std::size_t> ks);

// Throws ValidationError on a vocabulary mismatch inside the checkpoint.
EvaluationResult Evaluate(const Checkpoint& checkpoint, const Dataset& dataset,
                          std::span<const std::size_t> ks);

// tsv: query_id, skipped, ap, rr, then one p@k column per cutoff.
void WritePerQueryTsv(const EvaluationResult& result,
                      std::span<const std::size_t> ks, std::ostream& out);

struct PairEmbedding {
  std::string query_id;
  std::string doc_id;
  int label = 0;
  Embedding vector;
};

std::vector<PairEmbedding> EmbedDataset(const Checkpoint& checkpoint,
                                        const Dataset& dataset);

// tsv with header query_id, doc_id, label, e0 .. e{d-1}; one row per pair;
// 17 significant digits. An empty dataset gives a header-only file.
void WriteEmbeddingsTsv(const Checkpoint& checkpoint, const Dataset& dataset,
                        std::ostream& out);

}  // namespace contrank

#endif  // CONTRANK_EVALUATOR_H_
