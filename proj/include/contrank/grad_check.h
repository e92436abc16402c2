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

#ifndef CONTRANK_GRAD_CHECK_H_
#define CONTRANK_GRAD_CHECK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "contrank/batching.h"
#include "contrank/corpus.h"
#include "contrank/encoder.h"
#include "contrank/tokenizer.h"
#include "contrank/train_config.h"

namespace contrank {

struct GradCheckOptions {
  int num_probes = 200;
  double epsilon = 1e-4;
  std::uint64_t seed = 0;  // probe selection and parameter init
  std::int64_t step = 0;   // optimizer step, selects the DWA weights
  // Test hook applied to the analytic gradient before comparison.
  std::function<void(ParamGradients&)> corrupt_gradient;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t probes = 0;
  std::string worst_parameter;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Compares analytic dL/dtheta_i against (L(theta_i + eps) - L(theta_i - eps))
// / (2 eps) for randomly chosen parameters that the batch can influence
// (every dense layer scalar and the embedding rows of tokens in the batch).
// Relative error is |a - n| / max(|a|, |n|, 1e-8). Mined triplets are held
// fixed across the perturbed evaluations.
GradCheckResult GradCheck(const TrainConfig& config,
                          const Vocabulary& vocabulary,
                          const EncoderParams& params, const Batch& batch,
                          const GradCheckOptions& options);

// Builds the vocabulary from `dataset`, a seeded random model and the first
// batch of epoch 0.
GradCheckResult GradCheck(const TrainConfig& config, const Dataset& dataset,
                          const GradCheckOptions& options);

}  // namespace contrank

#endif  // CONTRANK_GRAD_CHECK_H_
