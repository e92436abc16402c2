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

#ifndef CONTRANK_MINING_H_
#define CONTRANK_MINING_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace contrank {

// Symmetric n x n matrix of L2 distances with a zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * n_ + j];
  }
  double& at(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

// Indices into a batch of pair embeddings.
struct Triplet {
  std::size_t anchor = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;

  auto operator<=>(const Triplet&) const = default;
};

// Similarity class per batch member: true marks the shared "pos" class
// (positive pairs, or reformulation pairs of the block's positive), false the
// "neg" class. Anchors and positives of a triplet are always drawn from the
// "pos" class.
using BatchLabels = std::vector<bool>;

// Throws InvalidArgument on an empty batch or mixed dimensions.
DistanceMatrix PairwiseDistances(std::span<const Eigen::VectorXd> embeddings);

// Every (a, p, n) with a != p both in the "pos" class and n in the "neg"
// class, in lexicographic order. Size P * (P - 1) * N.
std::vector<Triplet> EnumerateTriplets(const BatchLabels& labels);

// Triplets with d(a, n) - d(a, p) < margin, in enumeration order.
std::vector<Triplet> MineTripletMargin(const DistanceMatrix& dist,
                                       const BatchLabels& labels,
                                       double margin);

// One triplet per "pos" anchor: farthest same-class member and nearest
// other-class member, lowest index on ties. Anchors without a candidate on
// either side are skipped.
std::vector<Triplet> MineBatchHard(const DistanceMatrix& dist,
                                   const BatchLabels& labels);

// Angle at the negative in the angular-loss construction:
// tan(alpha) = d(a, p) / (2 d(c, n)) with c = (a + p) / 2. Returns degrees;
// 90 when d(c, n) == 0.
double TripletAngleDegrees(const Eigen::VectorXd& anchor,
                           const Eigen::VectorXd& positive,
                           const Eigen::VectorXd& negative);

// Triplets with alpha > threshold_degrees, in enumeration order. Triplets with
// d(c, n) == 0 are always kept. Throws InvalidArgument unless the threshold is
// in (0, 90).
std::vector<Triplet> MineAngular(std::span<const Eigen::VectorXd> embeddings,
                                 const BatchLabels& labels,
                                 double threshold_degrees);

enum class MinerType { kNone, kAngular, kBatchHard, kTripletMargin };

std::string_view MinerTypeName(MinerType type);
// Throws ConfigError on an unknown name.
MinerType ParseMinerType(std::string_view name);

struct MinerConfig {
  MinerType type = MinerType::kNone;
  double angle_threshold = 20.0;  // degrees, angular miner
  double margin = 0.2;            // triplet-margin miner
  std::size_t max_triplets = 512; // cap for the no-mining passthrough

  void Validate() const;
};

// Runs the configured miner. The no-mining mode returns all valid triplets,
// subsampled without replacement to max_triplets (seeded) and kept in
// enumeration order.
std::vector<Triplet> MineTriplets(const MinerConfig& config,
                                  std::span<const Eigen::VectorXd> embeddings,
                                  const BatchLabels& labels,
                                  std::uint64_t seed);

}  // namespace contrank

#endif  // CONTRANK_MINING_H_
