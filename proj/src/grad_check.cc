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

#include "contrank/grad_check.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "contrank/error.h"
#include "contrank/random.h"
#include "contrank/trainer.h"

namespace contrank {
namespace {

constexpr std::uint64_t kProbeStream = 0x70726f62;  // "prob"
constexpr double kDenominatorFloor = 1e-8;

// Indices of parameters the batch can influence: every dense parameter plus
// the embedding rows of tokens that survive truncation.
std::vector<std::size_t> InfluencedParameters(
    const EncoderParams& params, std::span<const EncodedPair> inputs) {
  const EncoderConfig& config = params.config();
  std::set<TokenId> tokens;
  for (const EncodedPair& pair : inputs) {
    for (TokenId id : PairInput(pair.query, pair.doc, config.max_len)) {
      tokens.insert(id);
    }
  }
  const auto base = params.values().data();
  const auto embedding_begin =
      static_cast<std::size_t>(params.embedding().data() - base);
  const std::size_t embedding_end =
      embedding_begin + static_cast<std::size_t>(config.vocab_size) *
                            static_cast<std::size_t>(config.embed_dim);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i < embedding_begin || i >= embedding_end) out.push_back(i);
  }
  for (TokenId id : tokens) {
    const std::size_t row =
        embedding_begin + static_cast<std::size_t>(id) *
                              static_cast<std::size_t>(config.embed_dim);
    for (int j = 0; j < config.embed_dim; ++j) out.push_back(row + j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

GradCheckResult GradCheck(const TrainConfig& config,
                          const Vocabulary& vocabulary,
                          const EncoderParams& params, const Batch& batch,
                          const GradCheckOptions& options) {
  if (options.num_probes < 1) {
    throw InvalidArgument("gradient check needs at least one probe");
  }
  if (!(options.epsilon > 0.0)) {
    throw InvalidArgument("gradient check epsilon must be positive");
  }
  const std::vector<EncodedPair> inputs = EncodeBatch(vocabulary, batch);
  ParamGradients analytic(params.config());
  const BatchLoss base = ComputeBatchLoss(params, inputs, batch, config,
                                          options.step, &analytic);
  if (options.corrupt_gradient) options.corrupt_gradient(analytic);

  const std::vector<std::size_t> candidates =
      InfluencedParameters(params, inputs);
  Rng rng(MixSeed({options.seed, kProbeStream}));
  const std::size_t count = std::min<std::size_t>(
      candidates.size(), static_cast<std::size_t>(options.num_probes));
  std::vector<std::size_t> picks =
      rng.SampleWithoutReplacement(candidates.size(), count);

  GradCheckResult result;
  EncoderParams probe = params;
  for (std::size_t pick : picks) {
    const std::size_t index = candidates[pick];
    const double original = params.values()[index];
    probe.values()[index] = original + options.epsilon;
    const double plus = ComputeBatchLoss(probe, inputs, batch, config,
                                         options.step, nullptr, &base.triplets)
                            .combined;
    probe.values()[index] = original - options.epsilon;
    const double minus = ComputeBatchLoss(probe, inputs, batch, config,
                                          options.step, nullptr,
                                          &base.triplets)
                             .combined;
    probe.values()[index] = original;

    const double numeric = (plus - minus) / (2.0 * options.epsilon);
    const double a = analytic.values()[index];
    const double error =
        std::abs(a - numeric) /
        std::max({std::abs(a), std::abs(numeric), kDenominatorFloor});
    ++result.probes;
    if (result.worst_parameter.empty() || error > result.max_relative_error) {
      result.max_relative_error = error;
      result.worst_parameter = params.DescribeIndex(index);
      result.worst_analytic = a;
      result.worst_numeric = numeric;
    }
  }
  return result;
}

GradCheckResult GradCheck(const TrainConfig& config, const Dataset& dataset,
                          const GradCheckOptions& options) {
  config.Validate();
  const Vocabulary vocabulary = Vocabulary::Build(dataset);
  EncoderConfig encoder = config.encoder;
  encoder.vocab_size = static_cast<int>(vocabulary.size());
  encoder.seed = options.seed;
  const EncoderParams params = EncoderParams::RandomInit(encoder);
  BatchBuilder builder(dataset, config.batch);
  BatchCursor cursor;
  std::optional<Batch> batch = builder.Next(cursor);
  if (!batch) throw InvalidArgument("dataset yields no batch");
  return GradCheck(config, vocabulary, params, *batch, options);
}

}  // namespace contrank
