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
#include <limits>
#include <random>
#include <vector>

#include "contrank/error.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace contrank {
namespace {

Eigen::VectorXd Vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(values.size());
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

TEST(StandardHingeTest, ActiveAndInactive) {
  HingeLoss active = StandardHinge(1.0, 0.5, 2.0);
  EXPECT_DOUBLE_EQ(active.value, 1.5);
  EXPECT_EQ(active.grad_pos, -1.0);
  EXPECT_EQ(active.grad_neg, 1.0);

  HingeLoss inactive = StandardHinge(5.0, 0.0, 2.0);
  EXPECT_EQ(inactive.value, 0.0);
  EXPECT_EQ(inactive.grad_pos, 0.0);
  EXPECT_EQ(inactive.grad_neg, 0.0);
}

TEST(StandardHingeTest, KinkHasZeroGradient) {
  HingeLoss kink = StandardHinge(2.0, 0.0, 2.0);
  EXPECT_EQ(kink.value, 0.0);
  EXPECT_EQ(kink.grad_pos, 0.0);
  EXPECT_EQ(kink.grad_neg, 0.0);
}

TEST(StandardHingeTest, RejectsNonFinite) {
  EXPECT_THROW(StandardHinge(std::nan(""), 0.0, 2.0), InvalidArgument);
  EXPECT_THROW(
      StandardHinge(0.0, std::numeric_limits<double>::infinity(), 2.0),
      InvalidArgument);
}

TEST(ModifiedHingeTest, PicksHardestNegative) {
  const std::vector<double> negs = {0.1, 0.7, 0.3};
  MaxHingeLoss loss = ModifiedHinge(1.0, negs, 2.0);
  EXPECT_DOUBLE_EQ(loss.value, 1.7);
  EXPECT_EQ(loss.hardest, 1u);
  EXPECT_EQ(loss.grad_pos, -1.0);
  EXPECT_EQ(loss.grad_negs, (std::vector<double>{0.0, 1.0, 0.0}));
}

TEST(ModifiedHingeTest, TieGoesToLowestIndex) {
  const std::vector<double> negs = {0.2, 0.9, 0.9};
  MaxHingeLoss loss = ModifiedHinge(0.0, negs, 2.0);
  EXPECT_EQ(loss.hardest, 1u);
  EXPECT_EQ(loss.grad_negs[1], 1.0);
  EXPECT_EQ(loss.grad_negs[2], 0.0);
}

TEST(ModifiedHingeTest, SingleNegativeEqualsStandard) {
  const std::vector<double> negs = {0.4};
  EXPECT_EQ(ModifiedHinge(0.3, negs, 2.0).value,
            StandardHinge(0.3, 0.4, 2.0).value);
}

TEST(ModifiedHingeTest, EmptyNegativesThrows) {
  EXPECT_THROW(ModifiedHinge(0.0, std::vector<double>{}, 2.0),
               InvalidArgument);
}

TEST(ModifiedHingeTest, EqualsMaxOverStandardHinges) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double pos = u(gen);
    std::vector<double> negs(1 + trial % 9);
    for (double& s : negs) s = u(gen);
    double expected = 0.0;
    for (double s : negs) expected = std::max(expected, StandardHinge(pos, s, 2.0).value);
    EXPECT_EQ(ModifiedHinge(pos, negs, 2.0).value, expected);
  }
}

TEST(HingeTest, TranslationInvariance) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double pos = u(gen);
    std::vector<double> negs = {u(gen), u(gen), u(gen)};
    // Shifts that are exact in binary keep the comparison bitwise.
    const double c = 0.5 * (trial % 7);
    std::vector<double> shifted = negs;
    for (double& s : shifted) s += c;
    MaxHingeLoss a = ModifiedHinge(pos, negs, 2.0);
    MaxHingeLoss b = ModifiedHinge(pos + c, shifted, 2.0);
    EXPECT_NEAR(a.value, b.value, 1e-12);
    EXPECT_EQ(a.grad_pos, b.grad_pos);
    EXPECT_EQ(a.grad_negs, b.grad_negs);
  }
}

TEST(L2DistanceTest, Basics) {
  EXPECT_EQ(L2Distance(Vec({1, 2}), Vec({1, 2})), 0.0);
  EXPECT_DOUBLE_EQ(L2Distance(Vec({0, 0}), Vec({3, 4})), 5.0);
  EXPECT_THROW(L2Distance(Vec({0, 0}), Vec({1, 2, 3})), InvalidArgument);
}

TEST(L2DistanceTest, GradientZeroAtCoincidence) {
  EXPECT_TRUE(L2DistanceGrad(Vec({1, 1}), Vec({1, 1})).isZero(0.0));
  Eigen::VectorXd g = L2DistanceGrad(Vec({3, 4}), Vec({0, 0}));
  EXPECT_DOUBLE_EQ(g[0], 0.6);
  EXPECT_DOUBLE_EQ(g[1], 0.8);
}

TEST(L2DistanceTest, MatchesNaiveLoop) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd x(32), y(32);
  for (int i = 0; i < 32; ++i) {
    x[i] = n(gen);
    y[i] = n(gen);
  }
  const double expected = oracle::L2(ToStd(x), ToStd(y));
  EXPECT_LE(std::fabs(L2Distance(x, y) - expected), 1e-12 * expected);
}

TEST(TripletMarginTest, WorkedExamples) {
  TripletLoss satisfied =
      TripletMargin(Vec({0, 0}), Vec({0, 1}), Vec({3, 4}), 0.05);
  EXPECT_EQ(satisfied.value, 0.0);
  EXPECT_TRUE(satisfied.grad_anchor.isZero(0.0));
  EXPECT_TRUE(satisfied.grad_pos.isZero(0.0));
  EXPECT_TRUE(satisfied.grad_neg.isZero(0.0));

  TripletLoss violated =
      TripletMargin(Vec({0, 0}), Vec({3, 4}), Vec({0, 1}), 0.1);
  EXPECT_NEAR(violated.value, 4.1, 1e-12);
  EXPECT_DOUBLE_EQ(violated.dist_pos, 5.0);
  EXPECT_DOUBLE_EQ(violated.dist_neg, 1.0);
}

TEST(TripletMarginTest, CoincidentPositiveGivesZeroPositiveBranch) {
  TripletLoss loss = TripletMargin(Vec({1, 1}), Vec({1, 1}), Vec({1, 1.01}), 0.05);
  EXPECT_GT(loss.value, 0.0);
  EXPECT_TRUE(loss.grad_pos.isZero(0.0));
  // Only the negative branch contributes to the anchor.
  EXPECT_TRUE((loss.grad_anchor + loss.grad_neg).isZero(1e-15));
}

TEST(TripletMarginTest, DimensionMismatchThrows) {
  EXPECT_THROW(TripletMargin(Vec({0}), Vec({0, 1}), Vec({1, 1}), 0.05),
               InvalidArgument);
}

TEST(TripletMarginTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> n(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd a(32), p(32), k(32);
    for (int i = 0; i < 32; ++i) {
      a[i] = n(gen);
      p[i] = n(gen);
      k[i] = n(gen);
    }
    // Large margin keeps the hinge active so the check is not vacuous.
    const double m = 3.0;
    TripletLoss loss = TripletMargin(a, p, k, m);
    ASSERT_GT(loss.value, 0.0);
    for (Eigen::VectorXd* v : {&a, &p, &k}) {
      const Eigen::VectorXd& g = v == &a   ? loss.grad_anchor
                                 : v == &p ? loss.grad_pos
                                           : loss.grad_neg;
      for (int i = 0; i < 32; i += 7) {
        const double numeric = oracle::CentralDifference(
            [&] { return TripletMargin(a, p, k, m).value; }, (*v)[i], 1e-4);
        EXPECT_LE(oracle::RelativeError(g[i], numeric), 1e-3);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(LossesTest, NonNegativeOnRandomInputs) {
  std::mt19937_64 gen(23);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    EXPECT_GE(StandardHinge(n(gen), n(gen), 2.0).value, 0.0);
    std::vector<double> negs = {n(gen), n(gen)};
    EXPECT_GE(ModifiedHinge(n(gen), negs, 2.0).value, 0.0);
    EXPECT_GE(TripletMargin(Vec({n(gen), n(gen)}), Vec({n(gen), n(gen)}),
                            Vec({n(gen), n(gen)}), 0.05)
                  .value,
              0.0);
  }
}

TEST(CombinedLossTest, Arithmetic) {
  EXPECT_DOUBLE_EQ(CombinedLoss(2.0, 4.0, 0.5, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(CombinedLoss(2.0, 4.0, 0.7, 0.0), 1.4);
  EXPECT_THROW(CombinedLoss(1.0, 1.0, -0.1, 0.5), InvalidArgument);
}

TEST(DwaTest, Landmarks) {
  const double f = 1200.0;
  LossWeights w0 = DwaWeights(0, f);
  EXPECT_EQ(w0.w1, 0.0);
  EXPECT_EQ(w0.w2, 1.0);
  EXPECT_NEAR(DwaWeights(300, f).w1, 1.0, 1e-12);
  EXPECT_NEAR(DwaWeights(100, f).w1, 0.5, 1e-12);
  EXPECT_THROW(DwaWeights(1, 0.0), InvalidArgument);
}

TEST(DwaTest, SumAndHalfPeriod) {
  const double f = 1000.0;
  for (std::int64_t t = 0; t < 3000; t += 7) {
    LossWeights w = DwaWeights(t, f);
    EXPECT_NEAR(w.w1 + w.w2, 1.0, 1e-15);
    EXPECT_GE(w.w1, 0.0);
    EXPECT_LE(w.w1, 1.0);
    EXPECT_NEAR(DwaWeights(t + 500, f).w1, w.w1, 1e-12);
  }
}

TEST(WeightsAtTest, StaticOrScheduled) {
  LossConfig config;
  config.w1 = 0.3;
  config.w2 = 0.9;
  LossWeights fixed = WeightsAt(config, 123);
  EXPECT_EQ(fixed.w1, 0.3);
  EXPECT_EQ(fixed.w2, 0.9);
  config.dwa_enabled = true;
  config.dwa_period = 400.0;
  EXPECT_NEAR(WeightsAt(config, 100).w1, 1.0, 1e-12);
}

TEST(LossConfigTest, Validation) {
  LossConfig config;
  EXPECT_NO_THROW(config.Validate());
  config.hinge_margin = 0.0;
  EXPECT_THROW(config.Validate(), ConfigError);
  config = LossConfig();
  config.w2 = -1.0;
  EXPECT_THROW(config.Validate(), ConfigError);
  config = LossConfig();
  config.dwa_enabled = true;
  config.dwa_period = -5.0;
  EXPECT_THROW(config.Validate(), ConfigError);
}

}  // namespace
}  // namespace contrank
