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

#ifndef CONTRANK_ENCODER_H_
#define CONTRANK_ENCODER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "contrank/tokenizer.h"

namespace contrank {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixView = Eigen::Map<RowMatrix>;
using ConstMatrixView = Eigen::Map<const RowMatrix>;
using VectorView = Eigen::Map<Eigen::VectorXd>;
using ConstVectorView = Eigen::Map<const Eigen::VectorXd>;

// Pair representation h(q, d).
using Embedding = Eigen::VectorXd;

struct EncoderConfig {
  int vocab_size = 3;
  int embed_dim = 64;    // E
  int hidden_dim = 64;   // H
  int output_dim = 32;   // d
  int max_len = 256;
  double init_scale = 0.1;  // RandomInit draws from uniform(-s, s)
  std::uint64_t seed = 0;

  // Throws ConfigError on non-positive sizes or scale.
  void Validate() const;

  bool operator==(const EncoderConfig&) const = default;
};

// Trainable tensors of the pair encoder and the linear scorer, stored in one
// contiguous buffer so optimizers and the gradient checker can address every
// scalar by flat index. Matrices are row-major views into that buffer.
//
//   embedding      vocab_size x E
//   layer1_weight  H x E,  layer1_bias  H
//   layer2_weight  d x H,  layer2_bias  d
//   scorer_weight  d,      scorer_bias  1
class EncoderParams {
 public:
  // All zeros.
  explicit EncoderParams(const EncoderConfig& config);

  // Uniform(-init_scale, init_scale) draws from config.seed.
  static EncoderParams RandomInit(const EncoderConfig& config);

  const EncoderConfig& config() const { return config_; }

  MatrixView embedding();
  ConstMatrixView embedding() const;
  MatrixView layer1_weight();
  ConstMatrixView layer1_weight() const;
  VectorView layer1_bias();
  ConstVectorView layer1_bias() const;
  MatrixView layer2_weight();
  ConstMatrixView layer2_weight() const;
  VectorView layer2_bias();
  ConstVectorView layer2_bias() const;
  VectorView scorer_weight();
  ConstVectorView scorer_weight() const;
  double& scorer_bias() { return values_.back(); }
  double scorer_bias() const { return values_.back(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  // Human-readable location of a flat index, e.g. "layer1_weight[3,7]".
  std::string DescribeIndex(std::size_t index) const;

  bool AllFinite() const;
  void SetZero();
  EncoderParams& operator+=(const EncoderParams& other);
  EncoderParams& operator*=(double factor);

  bool operator==(const EncoderParams&) const = default;

 private:
  struct Layout {
    std::size_t embedding, layer1_weight, layer1_bias, layer2_weight,
        layer2_bias, scorer_weight, scorer_bias, total;
    bool operator==(const Layout&) const = default;
  };
  static Layout MakeLayout(const EncoderConfig& config);

  EncoderConfig config_;
  Layout layout_;
  std::vector<double> values_;
};

// Same layout as the parameters they differentiate.
using ParamGradients = EncoderParams;

// Intermediate values of one forward pass, kept for the backward pass.
struct PairActivations {
  std::vector<TokenId> input;  // query ++ [SEP] ++ doc, truncated
  Eigen::VectorXd pooled;      // mean of token embeddings, E
  Eigen::VectorXd hidden;      // tanh(W1 pooled + b1), H
  Embedding embedding;         // W2 hidden + b2, d
};

// query ++ [SEP] ++ doc truncated to max_len tokens.
std::vector<TokenId> PairInput(std::span<const TokenId> query,
                               std::span<const TokenId> doc, int max_len);

// Throws InvalidArgument when an id is out of range or both sequences are
// empty.
PairActivations ForwardPair(const EncoderParams& params,
                            std::span<const TokenId> query,
                            std::span<const TokenId> doc, int max_len);
PairActivations ForwardPair(const EncoderParams& params,
                            std::span<const TokenId> query,
                            std::span<const TokenId> doc);

Embedding EncodePair(const EncoderParams& params,
                     std::span<const TokenId> query,
                     std::span<const TokenId> doc, int max_len);
Embedding EncodePair(const EncoderParams& params,
                     std::span<const TokenId> query,
                     std::span<const TokenId> doc);

// scorer_weight . embedding + scorer_bias.
double Score(const EncoderParams& params, const Embedding& embedding);

// Exact gradients of a loss whose dependence on the parameters goes through
// the given pairs' embeddings and scores. grad_embedding[i] is dL/dh_i and
// grad_score[i] is dL/ds_i for activations[i]. Contributions are summed into
// `grads` in pair order.
void AccumulateBackward(const EncoderParams& params,
                        std::span<const PairActivations> activations,
                        std::span<const Embedding> grad_embedding,
                        std::span<const double> grad_score,
                        ParamGradients& grads);

ParamGradients Backward(const EncoderParams& params,
                        std::span<const PairActivations> activations,
                        std::span<const Embedding> grad_embedding,
                        std::span<const double> grad_score);

}  // namespace contrank

#endif  // CONTRANK_ENCODER_H_
