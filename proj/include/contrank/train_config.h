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

#ifndef CONTRANK_TRAIN_CONFIG_H_
#define CONTRANK_TRAIN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "contrank/batching.h"
#include "contrank/encoder.h"
#include "contrank/losses.h"
#include "contrank/mining.h"

namespace contrank {

enum class OptimizerType { kAdam, kSgd };

// How per-triplet TML values combine into the contrastive term of a step.
enum class ContrastiveReduction { kMean, kSum };

// Defaults target full-size fine-tuning: learning rate
// 5e-6, 16 positives and 15 negatives per batch, gradient accumulation 8,
// block size 256, hinge margin 2, at most 10 epochs.
struct TrainConfig {
  LossConfig loss;
  BatchSpec batch;
  MinerConfig miner;
  // Adds the TML term. Ignored (no contrastive term) when w2 == 0 and DWA is
  // off.
  bool contrastive = true;
  ContrastiveReduction contrastive_reduction = ContrastiveReduction::kMean;
  OptimizerType optimizer = OptimizerType::kAdam;
  double learning_rate = 5e-6;
  int max_epochs = 10;
  int grad_accumulation_steps = 8;
  int early_stop_patience = 3;
  // vocab_size is filled in from the training data.
  EncoderConfig encoder;
  std::uint64_t seed = 0;

  // True when the contrastive term contributes to the loss.
  bool ContrastiveActive() const;

  // Throws ConfigError.
  void Validate() const;
};

// Parses the json config document. Every field is optional; unknown keys are
// rejected. Layout:
//   {"loss": {"hinge_margin", "triplet_margin", "w1", "w2", "dwa_enabled",
//             "dwa_period"},
//    "batch": {"regime", "positives_per_batch", "negatives_per_query",
//              "similarity", "seed"},
//    "miner": {"type", "angle_threshold", "margin", "max_triplets"},
//    "encoder": {"embed_dim", "hidden_dim", "output_dim", "max_len",
//                "init_scale"},
//    "contrastive", "contrastive_reduction", "optimizer", "learning_rate",
//    "max_epochs", "grad_accumulation_steps", "early_stop_patience", "seed"}
// "contrastive" defaults to true exactly for the contrastive regime and
// "batch.seed" defaults to "seed".
TrainConfig ParseTrainConfig(std::string_view json_text);
TrainConfig LoadTrainConfig(const std::filesystem::path& path);
std::string TrainConfigToJson(const TrainConfig& config);

}  // namespace contrank

#endif  // CONTRANK_TRAIN_CONFIG_H_
