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

#include "contrank/encoder.h"

#include <algorithm>
#include <cmath>

#include "contrank/error.h"
#include "contrank/random.h"

namespace contrank {

void EncoderConfig::Validate() const {
  if (vocab_size < 3) throw ConfigError("vocab_size must be at least 3");
  if (embed_dim <= 0 || hidden_dim <= 0 || output_dim <= 0) {
    throw ConfigError("encoder dimensions must be positive");
  }
  if (max_len <= 0) throw ConfigError("max_len must be positive");
  if (!(init_scale > 0.0) || !std::isfinite(init_scale)) {
    throw ConfigError("init_scale must be positive and finite");
  }
}

EncoderParams::Layout EncoderParams::MakeLayout(const EncoderConfig& c) {
  const auto v = static_cast<std::size_t>(c.vocab_size);
  const auto e = static_cast<std::size_t>(c.embed_dim);
  const auto h = static_cast<std::size_t>(c.hidden_dim);
  const auto d = static_cast<std::size_t>(c.output_dim);
  Layout layout{};
  std::size_t offset = 0;
  layout.embedding = offset;
  offset += v * e;
  layout.layer1_weight = offset;
  offset += h * e;
  layout.layer1_bias = offset;
  offset += h;
  layout.layer2_weight = offset;
  offset += d * h;
  layout.layer2_bias = offset;
  offset += d;
  layout.scorer_weight = offset;
  offset += d;
  layout.scorer_bias = offset;
  offset += 1;
  layout.total = offset;
  return layout;
}

EncoderParams::EncoderParams(const EncoderConfig& config)
    : config_(config), layout_(MakeLayout(config)) {
  config_.Validate();
  values_.assign(layout_.total, 0.0);
}

EncoderParams EncoderParams::RandomInit(const EncoderConfig& config) {
  EncoderParams params(config);
  Rng rng(config.seed);
  for (double& value : params.values_) value = rng.Uniform(-config.init_scale, config.init_scale);
  return params;
}

MatrixView EncoderParams::embedding() {
  return {values_.data() + layout_.embedding, config_.vocab_size,
          config_.embed_dim};
}
ConstMatrixView EncoderParams::embedding() const {
  return {values_.data() + layout_.embedding, config_.vocab_size,
          config_.embed_dim};
}
MatrixView EncoderParams::layer1_weight() {
  return {values_.data() + layout_.layer1_weight, config_.hidden_dim,
          config_.embed_dim};
}
ConstMatrixView EncoderParams::layer1_weight() const {
  return {values_.data() + layout_.layer1_weight, config_.hidden_dim,
          config_.embed_dim};
}
VectorView EncoderParams::layer1_bias() {
  return {values_.data() + layout_.layer1_bias, config_.hidden_dim};
}
ConstVectorView EncoderParams::layer1_bias() const {
  return {values_.data() + layout_.layer1_bias, config_.hidden_dim};
}
MatrixView EncoderParams::layer2_weight() {
  return {values_.data() + layout_.layer2_weight, config_.output_dim,
          config_.hidden_dim};
}
ConstMatrixView EncoderParams::layer2_weight() const {
  return {values_.data() + layout_.layer2_weight, config_.output_dim,
          config_.hidden_dim};
}
VectorView EncoderParams::layer2_bias() {
  return {values_.data() + layout_.layer2_bias, config_.output_dim};
}
ConstVectorView EncoderParams::layer2_bias() const {
  return {values_.data() + layout_.layer2_bias, config_.output_dim};
}
VectorView EncoderParams::scorer_weight() {
  return {values_.data() + layout_.scorer_weight, config_.output_dim};
}
ConstVectorView EncoderParams::scorer_weight() const {
  return {values_.data() + layout_.scorer_weight, config_.output_dim};
}

std::string EncoderParams::DescribeIndex(std::size_t index) const {
  auto matrix = [](const char* name, std::size_t local, int cols) {
    return std::string(name) + "[" + std::to_string(local / cols) + "," +
           std::to_string(local % cols) + "]";
  };
  auto vector = [](const char* name, std::size_t local) {
    return std::string(name) + "[" + std::to_string(local) + "]";
  };
  if (index >= layout_.total) return "out_of_range";
  if (index >= layout_.scorer_bias) return "scorer_bias";
  if (index >= layout_.scorer_weight) {
    return vector("scorer_weight", index - layout_.scorer_weight);
  }
  if (index >= layout_.layer2_bias) {
    return vector("layer2_bias", index - layout_.layer2_bias);
  }
  if (index >= layout_.layer2_weight) {
    return matrix("layer2_weight", index - layout_.layer2_weight,
                  config_.hidden_dim);
  }
  if (index >= layout_.layer1_bias) {
    return vector("layer1_bias", index - layout_.layer1_bias);
  }
  if (index >= layout_.layer1_weight) {
    return matrix("layer1_weight", index - layout_.layer1_weight,
                  config_.embed_dim);
  }
  return matrix("embedding", index, config_.embed_dim);
}

bool EncoderParams::AllFinite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

void EncoderParams::SetZero() { std::fill(values_.begin(), values_.end(), 0.0); }

EncoderParams& EncoderParams::operator+=(const EncoderParams& other) {
  if (other.config_ != config_) {
    throw ValidationError("parameter shapes differ");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] += other.values_[i];
  }
  return *this;
}

EncoderParams& EncoderParams::operator*=(double factor) {
  for (double& value : values_) value *= factor;
  return *this;
}

std::vector<TokenId> PairInput(std::span<const TokenId> query,
                               std::span<const TokenId> doc, int max_len) {
  std::vector<TokenId> input;
  input.reserve(query.size() + doc.size() + 1);
  input.insert(input.end(), query.begin(), query.end());
  input.push_back(Vocabulary::kSep);
  input.insert(input.end(), doc.begin(), doc.end());
  if (input.size() > static_cast<std::size_t>(max_len)) input.resize(max_len);
  return input;
}

PairActivations ForwardPair(const EncoderParams& params,
                            std::span<const TokenId> query,
                            std::span<const TokenId> doc, int max_len) {
  if (query.empty() && doc.empty()) throw InvalidArgument("empty pair");
  if (max_len <= 0) throw InvalidArgument("max_len must be positive");
  const int vocab = params.config().vocab_size;
  auto check = [vocab](std::span<const TokenId> ids) {
    for (TokenId id : ids) {
      if (id < 0 || id >= vocab) {
        throw InvalidArgument("token id " + std::to_string(id) +
                              " outside vocabulary of size " +
                              std::to_string(vocab));
      }
    }
  };
  check(query);
  check(doc);

  PairActivations act;
  act.input = PairInput(query, doc, max_len);
  const auto table = params.embedding();
  act.pooled = Eigen::VectorXd::Zero(params.config().embed_dim);
  for (TokenId id : act.input) act.pooled += table.row(id).transpose();
  act.pooled /= static_cast<double>(act.input.size());
  act.hidden = (params.layer1_weight() * act.pooled + params.layer1_bias())
                   .array()
                   .tanh()
                   .matrix();
  act.embedding = params.layer2_weight() * act.hidden + params.layer2_bias();
  return act;
}

PairActivations ForwardPair(const EncoderParams& params,
                            std::span<const TokenId> query,
                            std::span<const TokenId> doc) {
  return ForwardPair(params, query, doc, params.config().max_len);
}

Embedding EncodePair(const EncoderParams& params,
                     std::span<const TokenId> query,
                     std::span<const TokenId> doc, int max_len) {
  return ForwardPair(params, query, doc, max_len).embedding;
}

Embedding EncodePair(const EncoderParams& params,
                     std::span<const TokenId> query,
                     std::span<const TokenId> doc) {
  return EncodePair(params, query, doc, params.config().max_len);
}

double Score(const EncoderParams& params, const Embedding& embedding) {
  if (embedding.size() != params.config().output_dim) {
    throw InvalidArgument("embedding dimension " +
                          std::to_string(embedding.size()) +
                          " does not match scorer dimension " +
                          std::to_string(params.config().output_dim));
  }
  return params.scorer_weight().dot(embedding) + params.scorer_bias();
}

void AccumulateBackward(const EncoderParams& params,
                        std::span<const PairActivations> activations,
                        std::span<const Embedding> grad_embedding,
                        std::span<const double> grad_score,
                        ParamGradients& grads) {
  if (grad_embedding.size() != activations.size() ||
      grad_score.size() != activations.size()) {
    throw InvalidArgument("one upstream gradient per pair is required");
  }
  if (grads.config() != params.config()) {
    throw InvalidArgument("gradient buffer shape differs from parameters");
  }
  const int d = params.config().output_dim;
  auto table_grad = grads.embedding();
  for (std::size_t i = 0; i < activations.size(); ++i) {
    const PairActivations& act = activations[i];
    if (grad_embedding[i].size() != d || act.embedding.size() != d) {
      throw InvalidArgument("upstream embedding gradient has wrong dimension");
    }
    // The score depends on the embedding too: dL/dh = g_h + g_s * w_s.
    grads.scorer_weight() += grad_score[i] * act.embedding;
    grads.scorer_bias() += grad_score[i];
    const Eigen::VectorXd grad_out =
        grad_embedding[i] + grad_score[i] * params.scorer_weight();

    grads.layer2_bias() += grad_out;
    grads.layer2_weight().noalias() += grad_out * act.hidden.transpose();
    const Eigen::VectorXd grad_pre =
        ((params.layer2_weight().transpose() * grad_out).array() *
         (1.0 - act.hidden.array().square()))
            .matrix();
    grads.layer1_bias() += grad_pre;
    grads.layer1_weight().noalias() += grad_pre * act.pooled.transpose();
    const Eigen::VectorXd grad_pooled =
        (params.layer1_weight().transpose() * grad_pre) /
        static_cast<double>(act.input.size());
    for (TokenId id : act.input) table_grad.row(id) += grad_pooled.transpose();
  }
}

ParamGradients Backward(const EncoderParams& params,
                        std::span<const PairActivations> activations,
                        std::span<const Embedding> grad_embedding,
                        std::span<const double> grad_score) {
  ParamGradients grads(params.config());
  AccumulateBackward(params, activations, grad_embedding, grad_score, grads);
  return grads;
}

}  // namespace contrank
