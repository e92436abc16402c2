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

#include "contrank/trainer.h"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "contrank/error.h"
#include "contrank/evaluator.h"
#include "contrank/random.h"

namespace contrank {
namespace {

constexpr std::uint64_t kMinerStream = 0x6d696e65;  // "mine"
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

std::string FormatDouble(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

class Optimizer {
 public:
  Optimizer(const TrainConfig& config, std::size_t size)
      : type_(config.optimizer),
        learning_rate_(config.learning_rate),
        first_(size, 0.0),
        second_(size, 0.0) {}

  void Apply(const ParamGradients& grads, EncoderParams& params) {
    ++updates_;
    auto values = params.values();
    const auto g = grads.values();
    if (type_ == OptimizerType::kSgd) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] -= learning_rate_ * g[i];
      }
      return;
    }
    const double correction1 =
        1.0 - std::pow(kAdamBeta1, static_cast<double>(updates_));
    const double correction2 =
        1.0 - std::pow(kAdamBeta2, static_cast<double>(updates_));
    for (std::size_t i = 0; i < values.size(); ++i) {
      first_[i] = kAdamBeta1 * first_[i] + (1.0 - kAdamBeta1) * g[i];
      second_[i] = kAdamBeta2 * second_[i] + (1.0 - kAdamBeta2) * g[i] * g[i];
      const double m_hat = first_[i] / correction1;
      const double v_hat = second_[i] / correction2;
      values[i] -= learning_rate_ * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
    }
  }

 private:
  OptimizerType type_;
  double learning_rate_;
  std::vector<double> first_;
  std::vector<double> second_;
  std::int64_t updates_ = 0;
};

std::vector<Eigen::VectorXd> EmbedPairs(const EncoderParams& params,
                                        std::span<const EncodedPair> inputs) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(inputs.size());
  for (const auto& pair : inputs) {
    out.push_back(EncodePair(params, pair.query, pair.doc));
  }
  return out;
}

}  // namespace

std::vector<EncodedPair> EncodeBatch(const Vocabulary& vocabulary,
                                     const Batch& batch) {
  std::vector<EncodedPair> out;
  out.reserve(batch.pairs.size());
  for (const BatchPair& pair : batch.pairs) {
    out.push_back({vocabulary.Encode(pair.query_text),
                   vocabulary.Encode(pair.doc_text)});
  }
  return out;
}

BatchLoss ComputeBatchLoss(const EncoderParams& params,
                           std::span<const EncodedPair> inputs,
                           const Batch& batch, const TrainConfig& config,
                           std::int64_t step, ParamGradients* grads,
                           const std::vector<Triplet>* fixed_triplets) {
  const std::size_t n = batch.pairs.size();
  if (inputs.size() != n || batch.labels.size() != n) {
    throw InvalidArgument("batch inputs and labels must match the pair count");
  }
  if (batch.ranking_blocks.empty()) {
    throw InvalidArgument("batch has no ranking block");
  }

  std::vector<PairActivations> acts;
  acts.reserve(n);
  std::vector<Eigen::VectorXd> embeddings;
  embeddings.reserve(n);
  std::vector<double> scores;
  scores.reserve(n);
  for (const EncodedPair& pair : inputs) {
    acts.push_back(ForwardPair(params, pair.query, pair.doc));
    embeddings.push_back(acts.back().embedding);
    scores.push_back(Score(params, acts.back().embedding));
    if (!std::isfinite(scores.back()) || !embeddings.back().allFinite()) {
      throw TrainingError("non-finite forward pass at step " +
                          std::to_string(step));
    }
  }

  BatchLoss loss;
  loss.weights = WeightsAt(config.loss, step);
  const double w1 = loss.weights.w1;
  const double w2 = loss.weights.w2;
  std::vector<Embedding> grad_embedding(
      n, Eigen::VectorXd::Zero(params.config().output_dim));
  std::vector<double> grad_score(n, 0.0);

  const double block_scale =
      1.0 / static_cast<double>(batch.ranking_blocks.size());
  for (const RankingBlock& block : batch.ranking_blocks) {
    if (block.negatives.empty()) {
      throw InvalidArgument("ranking block without negatives");
    }
    if (config.batch.regime == BatchRegime::kShl) {
      if (block.negatives.size() != 1) {
        throw InvalidArgument("SHL blocks hold exactly one negative");
      }
      const HingeLoss hinge =
          StandardHinge(scores[block.positive], scores[block.negatives[0]],
                        config.loss.hinge_margin);
      loss.ranking += hinge.value;
      grad_score[block.positive] += w1 * block_scale * hinge.grad_pos;
      grad_score[block.negatives[0]] += w1 * block_scale * hinge.grad_neg;
    } else {
      std::vector<double> negative_scores;
      for (std::size_t k : block.negatives) negative_scores.push_back(scores[k]);
      const MaxHingeLoss hinge = ModifiedHinge(
          scores[block.positive], negative_scores, config.loss.hinge_margin);
      loss.ranking += hinge.value;
      grad_score[block.positive] += w1 * block_scale * hinge.grad_pos;
      for (std::size_t k = 0; k < block.negatives.size(); ++k) {
        grad_score[block.negatives[k]] += w1 * block_scale * hinge.grad_negs[k];
      }
    }
  }
  loss.ranking *= block_scale;

  if (config.ContrastiveActive()) {
    loss.triplets =
        fixed_triplets != nullptr
            ? *fixed_triplets
            : MineTriplets(config.miner, embeddings, batch.labels,
                           MixSeed({config.seed,
                                    static_cast<std::uint64_t>(step),
                                    kMinerStream}));
    if (!loss.triplets.empty()) {
      const double scale =
          config.contrastive_reduction == ContrastiveReduction::kMean
              ? 1.0 / static_cast<double>(loss.triplets.size())
              : 1.0;
      for (const Triplet& t : loss.triplets) {
        const TripletLoss tml =
            TripletMargin(embeddings[t.anchor], embeddings[t.positive],
                          embeddings[t.negative], config.loss.triplet_margin);
        loss.contrastive += tml.value;
        if (tml.value > 0.0) {
          grad_embedding[t.anchor] += w2 * scale * tml.grad_anchor;
          grad_embedding[t.positive] += w2 * scale * tml.grad_pos;
          grad_embedding[t.negative] += w2 * scale * tml.grad_neg;
        }
      }
      loss.contrastive *= scale;
    }
  }

  loss.combined = CombinedLoss(loss.ranking, loss.contrastive, w1, w2);
  if (grads != nullptr) {
    AccumulateBackward(params, acts, grad_embedding, grad_score, *grads);
  }
  return loss;
}

double SeparationStatistic(std::span<const Eigen::VectorXd> embeddings,
                           const BatchLabels& labels) {
  double inter = 0.0;
  double intra = 0.0;
  std::size_t inter_count = 0;
  std::size_t intra_count = 0;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < embeddings.size(); ++j) {
      if (j == i) continue;
      const double d = (embeddings[i] - embeddings[j]).norm();
      if (!labels[j]) {
        inter += d;
        ++inter_count;
      } else if (j > i) {
        intra += d;
        ++intra_count;
      }
    }
  }
  if (inter_count == 0 || intra_count == 0) return 0.0;
  return inter / static_cast<double>(inter_count) -
         intra / static_cast<double>(intra_count);
}

TrainResult Train(const TrainConfig& config, const Dataset& train,
                  const Dataset& validation, std::ostream* log) {
  config.Validate();
  if (train.groups.empty() || validation.groups.empty()) {
    throw InvalidArgument("training and validation datasets must be non-empty");
  }
  Vocabulary vocabulary = Vocabulary::Build(train);
  EncoderConfig encoder = config.encoder;
  encoder.vocab_size = static_cast<int>(vocabulary.size());
  encoder.seed = config.seed;
  EncoderParams params = EncoderParams::RandomInit(encoder);

  BatchBuilder builder(train, config.batch);
  if (builder.num_eligible() == 0) {
    throw TrainingError("empty epoch: no query group has both a positive and "
                        "a negative candidate");
  }
  if (log != nullptr && builder.num_skipped() > 0) {
    *log << "skipping " << builder.num_skipped()
         << " groups without a positive or a negative\n";
  }

  // Fixed probe batch for the separation statistic.
  BatchSpec probe_spec = config.batch;
  probe_spec.regime = BatchRegime::kContrastive;
  probe_spec.similarity = Similarity::kRelevanceLabel;
  probe_spec.positives_per_batch = std::max(2, config.batch.positives_per_batch);
  BatchBuilder probe_builder(train, probe_spec);
  BatchCursor probe_cursor;
  const Batch probe = *probe_builder.BuildContrastiveBatch(probe_cursor);
  const std::vector<EncodedPair> probe_inputs = EncodeBatch(vocabulary, probe);

  const std::vector<std::size_t> ks = {1};
  TrainHistory history;
  auto record_epoch = [&](int epoch) {
    EpochRecord record;
    record.epoch = epoch;
    record.validation =
        EvaluateModel(vocabulary, params, validation, ks).report;
    record.separation =
        SeparationStatistic(EmbedPairs(params, probe_inputs), probe.labels);
    history.epochs.push_back(record);
    if (log != nullptr) {
      *log << "epoch " << epoch << " validation MAP "
           << FormatDouble(record.validation.map) << " separation "
           << FormatDouble(record.separation) << '\n';
    }
    return record;
  };
  record_epoch(0);

  Optimizer optimizer(config, params.size());
  EncoderParams best = params;
  history.best_map = -1.0;
  int epochs_without_improvement = 0;
  std::int64_t step = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    ParamGradients grads(params.config());
    std::size_t pending = 0;
    std::size_t batches = 0;
    StepRecord sums;

    auto apply_step = [&] {
      const double inv = 1.0 / static_cast<double>(pending);
      grads *= inv;
      if (!grads.AllFinite()) {
        throw TrainingError("non-finite gradient at step " +
                            std::to_string(step));
      }
      optimizer.Apply(grads, params);
      if (!params.AllFinite()) {
        throw TrainingError("non-finite parameters after step " +
                            std::to_string(step));
      }
      const LossWeights weights = WeightsAt(config.loss, step);
      history.steps.push_back({step, epoch, sums.l_rank * inv,
                               sums.l_con * inv, sums.l_combined * inv,
                               weights.w1, weights.w2, sums.num_triplets});
      ++step;
      grads.SetZero();
      pending = 0;
      sums = StepRecord{};
    };

    BatchCursor cursor{epoch, 0};
    while (std::optional<Batch> batch = builder.Next(cursor)) {
      const std::vector<EncodedPair> inputs = EncodeBatch(vocabulary, *batch);
      const BatchLoss loss =
          ComputeBatchLoss(params, inputs, *batch, config, step, &grads);
      if (!std::isfinite(loss.combined)) {
        throw TrainingError("non-finite loss at step " + std::to_string(step));
      }
      if (config.ContrastiveActive() && loss.triplets.empty()) {
        ++history.zero_triplet_batches;
      }
      sums.l_rank += loss.ranking;
      sums.l_con += loss.contrastive;
      sums.l_combined += loss.combined;
      sums.num_triplets += loss.triplets.size();
      ++batches;
      if (++pending == static_cast<std::size_t>(config.grad_accumulation_steps)) {
        apply_step();
      }
    }
    if (pending > 0) apply_step();
    if (batches == 0) {
      throw TrainingError("epoch " + std::to_string(epoch) +
                          " produced no batch");
    }

    const EpochRecord record = record_epoch(epoch);
    if (record.validation.map > history.best_map) {
      history.best_map = record.validation.map;
      history.best_epoch = epoch;
      best = params;
      epochs_without_improvement = 0;
    } else if (++epochs_without_improvement >= config.early_stop_patience) {
      if (log != nullptr) *log << "early stop after epoch " << epoch << '\n';
      break;
    }
  }
  if (log != nullptr && history.zero_triplet_batches > 0) {
    *log << history.zero_triplet_batches
         << " batches mined no triplet (contrastive term 0)\n";
  }
  return {Checkpoint{std::move(vocabulary), std::move(best)},
          std::move(history)};
}

void WriteHistoryCsv(const TrainHistory& history, std::ostream& out) {
  out << "step,epoch,l_rank,l_con,l_combined,w1,w2\n";
  for (const StepRecord& r : history.steps) {
    out << r.step << ',' << r.epoch << ',' << FormatDouble(r.l_rank) << ','
        << FormatDouble(r.l_con) << ',' << FormatDouble(r.l_combined) << ','
        << FormatDouble(r.w1) << ',' << FormatDouble(r.w2) << '\n';
  }
}

void WriteEpochCsv(const TrainHistory& history, std::ostream& out) {
  out << "epoch,map,mrr,p_at_1,separation\n";
  for (const EpochRecord& r : history.epochs) {
    auto p1 = r.validation.p_at_k.find(1);
    out << r.epoch << ',' << FormatDouble(r.validation.map) << ','
        << FormatDouble(r.validation.mrr) << ','
        << FormatDouble(p1 == r.validation.p_at_k.end() ? 0.0 : p1->second)
        << ',' << FormatDouble(r.separation) << '\n';
  }
}

}  // namespace contrank
