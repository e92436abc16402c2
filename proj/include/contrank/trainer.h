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

#ifndef CONTRANK_TRAINER_H_
#define CONTRANK_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "contrank/batching.h"
#include "contrank/checkpoint.h"
#include "contrank/corpus.h"
#include "contrank/encoder.h"
#include "contrank/losses.h"
#include "contrank/metrics.h"
#include "contrank/mining.h"
#include "contrank/tokenizer.h"
#include "contrank/train_config.h"

namespace contrank {

struct EncodedPair {
  std::vector<TokenId> query;
  std::vector<TokenId> doc;
};

std::vector<EncodedPair> EncodeBatch(const Vocabulary& vocabulary,
                                     const Batch& batch);

struct BatchLoss {
  double ranking = 0.0;
  double contrastive = 0.0;
  double combined = 0.0;
  LossWeights weights;
  std::vector<Triplet> triplets;  // the mined set the contrastive term used
};

// Forward pass and loss of one batch at optimizer step `step`:
//   ranking      mean over ranking blocks of SHL (shl regime) or MHL
//   contrastive  mean (or sum) of TML over mined triplets, 0 if none
//   combined     w1 * ranking + w2 * contrastive, weights static or DWA
// When `grads` is non-null the exact parameter gradient of `combined` is
// added to it. When `fixed_triplets` is non-null mining is skipped and those
// triplets are used instead. Throws TrainingError when a score or embedding
// is non-finite.
BatchLoss ComputeBatchLoss(const EncoderParams& params,
                           std::span<const EncodedPair> inputs,
                           const Batch& batch, const TrainConfig& config,
                           std::int64_t step, ParamGradients* grads,
                           const std::vector<Triplet>* fixed_triplets = nullptr);

// Mean distance between "pos" and "neg" members minus mean distance between
// pairs of "pos" members. Zero when either set of pairs is empty.
double SeparationStatistic(std::span<const Eigen::VectorXd> embeddings,
                           const BatchLabels& labels);

struct StepRecord {
  std::int64_t step = 0;
  int epoch = 0;
  double l_rank = 0.0;
  double l_con = 0.0;
  double l_combined = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
  std::size_t num_triplets = 0;
};

struct EpochRecord {
  int epoch = 0;  // 0 is the untrained model
  MetricsReport validation;
  double separation = 0.0;
};

struct TrainHistory {
  std::vector<StepRecord> steps;
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_map = 0.0;
  std::size_t zero_triplet_batches = 0;
};

struct TrainResult {
  Checkpoint checkpoint;  // parameters of the best validation epoch
  TrainHistory history;
};

// Runs the training loop with early stopping on validation MAP. The
// vocabulary is built from `train`. Progress lines go to `log` when given.
// Throws TrainingError on a non-finite score, loss, gradient or parameter
// (naming the step) or
// when an epoch yields no batch.
TrainResult Train(const TrainConfig& config, const Dataset& train,
                  const Dataset& validation, std::ostream* log = nullptr);

// csv header "step,epoch,l_rank,l_con,l_combined,w1,w2", doubles printed with
// 17 significant digits.
void WriteHistoryCsv(const TrainHistory& history, std::ostream& out);

// csv header "epoch,map,mrr,p_at_1,separation".
void WriteEpochCsv(const TrainHistory& history, std::ostream& out);

}  // namespace contrank

#endif  // CONTRANK_TRAINER_H_
