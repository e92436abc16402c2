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

#ifndef CONTRANK_LOSSES_H_
#define CONTRANK_LOSSES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace contrank {

struct LossConfig {
  double hinge_margin = 2.0;     // lambda
  double triplet_margin = 0.05;  // m
  double w1 = 0.5;               // ranking weight
  double w2 = 0.5;               // contrastive weight
  bool dwa_enabled = false;
  double dwa_period = 1000.0;    // F, in optimizer steps

  // Throws ConfigError.
  void Validate() const;
};

// Pairwise hinge on one (positive, negative) score pair.
struct HingeLoss {
  double value = 0.0;
  double grad_pos = 0.0;
  double grad_neg = 0.0;
};

// max(0, lambda - s_pos + s_neg). Gradients are (-1, +1) when the hinge is
// active and exactly zero otherwise, including at the kink.
HingeLoss StandardHinge(double s_pos, double s_neg, double margin);

struct MaxHingeLoss {
  double value = 0.0;
  double grad_pos = 0.0;
  std::vector<double> grad_negs;  // non-zero only at `hardest`
  std::size_t hardest = 0;        // lowest index among tied maxima
};

// max(0, lambda - s_pos + max_i s_negs[i]). Throws InvalidArgument on an
// empty negative list.
MaxHingeLoss ModifiedHinge(double s_pos, std::span<const double> s_negs,
                           double margin);

// Euclidean distance. Throws InvalidArgument on a dimension mismatch.
double L2Distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// d/dx of L2Distance: (x - y) / D, and the zero vector when D == 0.
Eigen::VectorXd L2DistanceGrad(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y);

struct TripletLoss {
  double value = 0.0;
  double dist_pos = 0.0;  // D(a, k+)
  double dist_neg = 0.0;  // D(a, k-)
  Eigen::VectorXd grad_anchor;
  Eigen::VectorXd grad_pos;
  Eigen::VectorXd grad_neg;
};

// max(0, m + D(a, k+) - D(a, k-)). A zero distance contributes a zero
// gradient on its branch.
TripletLoss TripletMargin(const Eigen::VectorXd& anchor,
                          const Eigen::VectorXd& pos,
                          const Eigen::VectorXd& neg, double margin);

// w1 * l_rank + w2 * l_con. The weights are not normalized.
double CombinedLoss(double l_rank, double l_con, double w1, double w2);

struct LossWeights {
  double w1 = 0.5;
  double w2 = 0.5;
};

// Dynamic weighted aggregation: w1 = |sin(2 pi t / F)|, w2 = 1 - w1.
// Throws InvalidArgument when period <= 0.
LossWeights DwaWeights(std::int64_t step, double period);

// Static weights or the DWA schedule at `step`, per the config.
LossWeights WeightsAt(const LossConfig& config, std::int64_t step);

}  // namespace contrank

#endif  // CONTRANK_LOSSES_H_
