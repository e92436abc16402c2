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

#include "contrank/losses.h"

#include <cmath>
#include <numbers>

#include "contrank/error.h"

namespace contrank {
namespace {

void RequireFinite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw InvalidArgument(std::string(what) + " must be finite");
  }
}

void RequireSameDim(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("dimension mismatch: " + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()));
  }
}

}  // namespace

void LossConfig::Validate() const {
  if (!(hinge_margin > 0.0) || !std::isfinite(hinge_margin)) {
    throw ConfigError("hinge_margin must be > 0");
  }
  if (!(triplet_margin >= 0.0) || !std::isfinite(triplet_margin)) {
    throw ConfigError("triplet_margin must be >= 0");
  }
  if (!(w1 >= 0.0) || !(w2 >= 0.0) || !std::isfinite(w1) ||
      !std::isfinite(w2)) {
    throw ConfigError("loss weights must be finite and >= 0");
  }
  if (dwa_enabled) {
    if (!(dwa_period > 0.0) || !std::isfinite(dwa_period)) {
      throw ConfigError("dwa_period must be > 0");
    }
  } else if (!(w1 + w2 > 0.0)) {
    throw ConfigError("w1 + w2 must be > 0 when DWA is disabled");
  }
}

HingeLoss StandardHinge(double s_pos, double s_neg, double margin) {
  RequireFinite(s_pos, "s_pos");
  RequireFinite(s_neg, "s_neg");
  RequireFinite(margin, "margin");
  if (!(margin > 0.0)) throw InvalidArgument("hinge margin must be > 0");
  HingeLoss loss;
  const double slack = margin - s_pos + s_neg;
  if (slack > 0.0) {
    loss.value = slack;
    loss.grad_pos = -1.0;
    loss.grad_neg = 1.0;
  }
  return loss;
}

MaxHingeLoss ModifiedHinge(double s_pos, std::span<const double> s_negs,
                           double margin) {
  if (s_negs.empty()) throw InvalidArgument("empty negative list");
  RequireFinite(s_pos, "s_pos");
  RequireFinite(margin, "margin");
  if (!(margin > 0.0)) throw InvalidArgument("hinge margin must be > 0");
  MaxHingeLoss loss;
  loss.grad_negs.assign(s_negs.size(), 0.0);
  for (std::size_t i = 0; i < s_negs.size(); ++i) {
    RequireFinite(s_negs[i], "s_neg");
    if (s_negs[i] > s_negs[loss.hardest]) loss.hardest = i;
  }
  const double slack = margin - s_pos + s_negs[loss.hardest];
  if (slack > 0.0) {
    loss.value = slack;
    loss.grad_pos = -1.0;
    loss.grad_negs[loss.hardest] = 1.0;
  }
  return loss;
}

double L2Distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  RequireSameDim(x, y);
  return (x - y).norm();
}

Eigen::VectorXd L2DistanceGrad(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y) {
  RequireSameDim(x, y);
  const double dist = (x - y).norm();
  if (dist == 0.0) return Eigen::VectorXd::Zero(x.size());
  return (x - y) / dist;
}

TripletLoss TripletMargin(const Eigen::VectorXd& anchor,
                          const Eigen::VectorXd& pos,
                          const Eigen::VectorXd& neg, double margin) {
  RequireSameDim(anchor, pos);
  RequireSameDim(anchor, neg);
  RequireFinite(margin, "triplet margin");
  if (!anchor.allFinite() || !pos.allFinite() || !neg.allFinite()) {
    throw InvalidArgument("triplet embeddings must be finite");
  }
  TripletLoss loss;
  loss.dist_pos = L2Distance(anchor, pos);
  loss.dist_neg = L2Distance(anchor, neg);
  loss.grad_anchor = Eigen::VectorXd::Zero(anchor.size());
  loss.grad_pos = Eigen::VectorXd::Zero(anchor.size());
  loss.grad_neg = Eigen::VectorXd::Zero(anchor.size());
  const double slack = margin + loss.dist_pos - loss.dist_neg;
  if (slack > 0.0) {
    loss.value = slack;
    const Eigen::VectorXd toward_pos = L2DistanceGrad(anchor, pos);
    const Eigen::VectorXd toward_neg = L2DistanceGrad(anchor, neg);
    loss.grad_anchor = toward_pos - toward_neg;
    loss.grad_pos = -toward_pos;
    loss.grad_neg = toward_neg;
  }
  return loss;
}

double CombinedLoss(double l_rank, double l_con, double w1, double w2) {
  RequireFinite(l_rank, "ranking loss");
  RequireFinite(l_con, "contrastive loss");
  if (!(w1 >= 0.0) || !(w2 >= 0.0)) {
    throw InvalidArgument("loss weights must be >= 0");
  }
  return w1 * l_rank + w2 * l_con;
}

LossWeights DwaWeights(std::int64_t step, double period) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw InvalidArgument("DWA period must be > 0");
  }
  const double w1 =
      std::abs(std::sin(2.0 * std::numbers::pi * static_cast<double>(step) /
                        period));
  return {w1, 1.0 - w1};
}

LossWeights WeightsAt(const LossConfig& config, std::int64_t step) {
  if (config.dwa_enabled) return DwaWeights(step, config.dwa_period);
  return {config.w1, config.w2};
}

}  // namespace contrank
