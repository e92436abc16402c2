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

#include "contrank/mining.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "contrank/error.h"
#include "contrank/losses.h"
#include "contrank/random.h"

namespace contrank {

DistanceMatrix PairwiseDistances(std::span<const Eigen::VectorXd> embeddings) {
  if (embeddings.empty()) throw InvalidArgument("no embeddings");
  DistanceMatrix dist(embeddings.size());
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    for (std::size_t j = i + 1; j < embeddings.size(); ++j) {
      const double d = L2Distance(embeddings[i], embeddings[j]);
      dist.at(i, j) = d;
      dist.at(j, i) = d;
    }
  }
  return dist;
}

std::vector<Triplet> EnumerateTriplets(const BatchLabels& labels) {
  std::vector<Triplet> out;
  const std::size_t n = labels.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (!labels[a]) continue;
    for (std::size_t p = 0; p < n; ++p) {
      if (p == a || !labels[p]) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (!labels[k]) out.push_back({a, p, k});
      }
    }
  }
  return out;
}

std::vector<Triplet> MineTripletMargin(const DistanceMatrix& dist,
                                       const BatchLabels& labels,
                                       double margin) {
  if (!(margin >= 0.0)) throw InvalidArgument("miner margin must be >= 0");
  if (dist.size() != labels.size()) {
    throw InvalidArgument("distance matrix and labels differ in size");
  }
  std::vector<Triplet> out;
  for (const Triplet& t : EnumerateTriplets(labels)) {
    if (dist(t.anchor, t.negative) - dist(t.anchor, t.positive) < margin) {
      out.push_back(t);
    }
  }
  return out;
}

std::vector<Triplet> MineBatchHard(const DistanceMatrix& dist,
                                   const BatchLabels& labels) {
  if (dist.size() != labels.size()) {
    throw InvalidArgument("distance matrix and labels differ in size");
  }
  std::vector<Triplet> out;
  const std::size_t n = labels.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (!labels[a]) continue;
    std::size_t hardest_pos = n;
    std::size_t hardest_neg = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == a) continue;
      if (labels[j]) {
        if (hardest_pos == n || dist(a, j) > dist(a, hardest_pos)) {
          hardest_pos = j;
        }
      } else if (hardest_neg == n || dist(a, j) < dist(a, hardest_neg)) {
        hardest_neg = j;
      }
    }
    if (hardest_pos != n && hardest_neg != n) {
      out.push_back({a, hardest_pos, hardest_neg});
    }
  }
  return out;
}

double TripletAngleDegrees(const Eigen::VectorXd& anchor,
                           const Eigen::VectorXd& positive,
                           const Eigen::VectorXd& negative) {
  const Eigen::VectorXd center = 0.5 * (anchor + positive);
  const double to_negative = L2Distance(center, negative);
  if (to_negative == 0.0) return 90.0;
  return std::atan(L2Distance(anchor, positive) / (2.0 * to_negative)) *
         180.0 / std::numbers::pi;
}

std::vector<Triplet> MineAngular(std::span<const Eigen::VectorXd> embeddings,
                                 const BatchLabels& labels,
                                 double threshold_degrees) {
  if (!(threshold_degrees > 0.0 && threshold_degrees < 90.0)) {
    throw InvalidArgument("angular threshold must be in (0, 90) degrees");
  }
  if (embeddings.size() != labels.size()) {
    throw InvalidArgument("embeddings and labels differ in size");
  }
  std::vector<Triplet> out;
  for (const Triplet& t : EnumerateTriplets(labels)) {
    const double angle =
        TripletAngleDegrees(embeddings[t.anchor], embeddings[t.positive],
                            embeddings[t.negative]);
    if (angle > threshold_degrees) out.push_back(t);
  }
  return out;
}

std::string_view MinerTypeName(MinerType type) {
  switch (type) {
    case MinerType::kNone:
      return "none";
    case MinerType::kAngular:
      return "angular";
    case MinerType::kBatchHard:
      return "batch_hard";
    case MinerType::kTripletMargin:
      return "triplet_margin";
  }
  return "none";
}

MinerType ParseMinerType(std::string_view name) {
  for (MinerType type : {MinerType::kNone, MinerType::kAngular,
                         MinerType::kBatchHard, MinerType::kTripletMargin}) {
    if (MinerTypeName(type) == name) return type;
  }
  throw ConfigError("unknown miner '" + std::string(name) + "'");
}

void MinerConfig::Validate() const {
  if (type == MinerType::kAngular &&
      !(angle_threshold > 0.0 && angle_threshold < 90.0)) {
    throw ConfigError("miner angle_threshold must be in (0, 90)");
  }
  if (type == MinerType::kTripletMargin && !(margin >= 0.0)) {
    throw ConfigError("miner margin must be >= 0");
  }
  if (type == MinerType::kNone && max_triplets == 0) {
    throw ConfigError("max_triplets must be positive");
  }
}

std::vector<Triplet> MineTriplets(const MinerConfig& config,
                                  std::span<const Eigen::VectorXd> embeddings,
                                  const BatchLabels& labels,
                                  std::uint64_t seed) {
  switch (config.type) {
    case MinerType::kAngular:
      return MineAngular(embeddings, labels, config.angle_threshold);
    case MinerType::kBatchHard:
      return MineBatchHard(PairwiseDistances(embeddings), labels);
    case MinerType::kTripletMargin:
      return MineTripletMargin(PairwiseDistances(embeddings), labels,
                               config.margin);
    case MinerType::kNone:
      break;
  }
  std::vector<Triplet> all = EnumerateTriplets(labels);
  if (all.size() <= config.max_triplets) return all;
  Rng rng(seed);
  std::vector<std::size_t> keep =
      rng.SampleWithoutReplacement(all.size(), config.max_triplets);
  std::sort(keep.begin(), keep.end());
  std::vector<Triplet> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(all[i]);
  return out;
}

}  // namespace contrank
