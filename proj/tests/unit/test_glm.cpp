/*
 * Copyright 2026 The rankagg Authors.
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

#include "rankagg/glm.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_util.hpp"

namespace rankagg {
namespace {

Eigen::MatrixXd RandomDesign(Eigen::Index n, Eigen::Index m, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXd x(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) x(i, j) = g(rng);
  }
  return x;
}

Eigen::VectorXd RandomVector(Eigen::Index n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

GlmOptions NoIntercept() {
  GlmOptions o;
  o.intercept = false;
  return o;
}

TEST(Glm, IdentityDesign) {
  const auto fit = FitGlm(DivergenceSpec::SquaredEuclidean(), Eigen::MatrixXd::Identity(3, 3),
                          Vec({1, 2, 3}), Regularization::None(), NoIntercept());
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(fit.weights[i], i + 1.0, 1e-12);
  EXPECT_NEAR(fit.objective, 0.0, 1e-20);
}

TEST(Glm, LeastSquaresMatchesNormalEquations) {
  std::mt19937_64 rng(31);
  const Eigen::MatrixXd x = RandomDesign(60, 5, 1.0, rng);
  const Eigen::VectorXd z = RandomVector(60, 2.0, rng);
  const auto fit = FitGlm(DivergenceSpec::SquaredEuclidean(), x, z, Regularization::None());
  Eigen::MatrixXd a(60, 6);
  a << x, Eigen::VectorXd::Ones(60);
  const Eigen::VectorXd ref = (a.transpose() * a).ldlt().solve(a.transpose() * z);
  for (Eigen::Index j = 0; j < 5; ++j) EXPECT_NEAR(fit.weights[j], ref[j], 1e-8);
  EXPECT_NEAR(fit.intercept, ref[5], 1e-8);
  EXPECT_TRUE(fit.converged);
}

TEST(Glm, RidgeMatchesClosedForm) {
  std::mt19937_64 rng(32);
  const Eigen::MatrixXd x = RandomDesign(40, 6, 1.0, rng);
  const Eigen::VectorXd z = RandomVector(40, 1.0, rng);
  for (double lambda : {0.1, 1.0, 10.0}) {
    const auto fit = FitGlm(DivergenceSpec::SquaredEuclidean(), x, z,
                            Regularization::Ridge(lambda), NoIntercept());
    const Eigen::MatrixXd lhs =
        x.transpose() * x + lambda * Eigen::MatrixXd::Identity(6, 6);
    const Eigen::VectorXd ref = lhs.ldlt().solve(x.transpose() * z);
    for (Eigen::Index j = 0; j < 6; ++j) EXPECT_NEAR(fit.weights[j], ref[j], 1e-8);
  }
}

TEST(Glm, GeneralizedIPlantedSolution) {
  std::mt19937_64 rng(33);
  const Eigen::MatrixXd x = RandomDesign(80, 4, 0.5, rng);
  const Eigen::VectorXd w0 = RandomVector(4, 1.0, rng);
  const ScoreVector target = (x * w0).array().exp().matrix();
  const auto fit = FitGlm(DivergenceSpec::GeneralizedI(), x, target, Regularization::None());
  EXPECT_LT(fit.objective, 1e-8);
  for (Eigen::Index j = 0; j < 4; ++j) EXPECT_NEAR(fit.weights[j], w0[j], 1e-4);
}

TEST(Glm, ObjectiveTraceNonincreasing) {
  std::mt19937_64 rng(34);
  const Eigen::MatrixXd x = RandomDesign(50, 3, 0.5, rng);
  const ScoreVector target = RandomVector(50, 1.0, rng).array().exp().matrix();
  for (const auto& reg : {Regularization::None(), Regularization::Lasso(0.5)}) {
    const auto fit = FitGlm(DivergenceSpec::GeneralizedI(), x, target, reg);
    for (std::size_t k = 1; k < fit.trace.size(); ++k) {
      EXPECT_LE(fit.trace[k], fit.trace[k - 1] + 1e-12);
    }
    EXPECT_GE(fit.objective, 0.0);
  }
}

TEST(Glm, ZeroStrengthEqualsNone) {
  std::mt19937_64 rng(35);
  const Eigen::MatrixXd x = RandomDesign(30, 3, 1.0, rng);
  const Eigen::VectorXd z = RandomVector(30, 1.0, rng);
  const auto a = FitGlm(DivergenceSpec::SquaredEuclidean(), x, z, Regularization::None());
  const auto b = FitGlm(DivergenceSpec::SquaredEuclidean(), x, z, Regularization::Lasso(0.0));
  const auto c = FitGlm(DivergenceSpec::SquaredEuclidean(), x, z, Regularization::Ridge(0.0));
  EXPECT_EQ(StdVec(a.weights), StdVec(b.weights));
  EXPECT_EQ(StdVec(a.weights), StdVec(c.weights));
}

TEST(Glm, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(36);
  const Family fams[] = {Family::kSquaredEuclidean, Family::kKL, Family::kGeneralizedI};
  for (Family f : fams) {
    const auto spec = DivergenceSpec::For(f);
    for (int t = 0; t < 20; ++t) {
      const Eigen::MatrixXd x = RandomDesign(25, 3, 0.5, rng);
      ScoreVector target = RandomVector(25, 1.0, rng);
      if (spec.exp_link()) target = target.array().exp().matrix();
      const Regularization reg = Regularization::Ridge(0.3);
      const Eigen::VectorXd params = RandomVector(4, 0.5, rng);
      const Eigen::VectorXd g =
          detail::GlmSmoothGradient(spec, x, target, reg, params, true);
      auto obj = [&](const Eigen::VectorXd& v) {
        return detail::GlmSmoothObjective(spec, x, target, reg, v, true);
      };
      for (Eigen::Index j = 0; j < 4; ++j) {
        const double fd = oracle::CentralDiff(obj, params, j, 1e-6);
        EXPECT_NEAR(g[j], fd, 1e-5 * std::max(1.0, std::abs(fd))) << FamilyName(f);
      }
    }
  }
}

TEST(Glm, RandomStartsAgree) {
  std::mt19937_64 rng(37);
  const Eigen::MatrixXd x = RandomDesign(100, 5, 0.4, rng);
  const ScoreVector target = RandomVector(100, 0.8, rng).array().exp().matrix();
  for (const auto& reg : {Regularization::None(), Regularization::Lasso(1.0)}) {
    std::vector<double> objectives;
    for (int s = 0; s < 10; ++s) {
      GlmOptions o;
      o.initial_weights = RandomVector(5, 0.5, rng);
      o.initial_intercept = std::normal_distribution<double>(0.0, 0.5)(rng);
      objectives.push_back(
          FitGlm(DivergenceSpec::GeneralizedI(), x, target, reg, o).penalized_objective);
    }
    for (double v : objectives) EXPECT_NEAR(v, objectives.front(), 1e-6);
  }
}

TEST(Glm, LassoZeroesNoiseColumns) {
  std::mt19937_64 rng(38);
  const Eigen::MatrixXd x = RandomDesign(200, 6, 1.0, rng);
  const ScoreVector z = 2.0 * x.col(0);
  const auto fit = FitGlm(DivergenceSpec::SquaredEuclidean(), x, z, Regularization::Lasso(20.0));
  EXPECT_GT(fit.weights[0], 1.0);
  for (Eigen::Index j = 1; j < 6; ++j) EXPECT_LT(std::abs(fit.weights[j]), 1e-6);
}

TEST(Glm, LassoSatisfiesOptimality) {
  std::mt19937_64 rng(39);
  const Eigen::MatrixXd x = RandomDesign(60, 8, 1.0, rng);
  const Eigen::VectorXd z = RandomVector(60, 1.0, rng);
  const double lambda = 5.0;
  const auto fit = FitGlm(DivergenceSpec::SquaredEuclidean(), x, z, Regularization::Lasso(lambda));
  Eigen::VectorXd params(9);
  params << fit.weights, fit.intercept;
  const Eigen::VectorXd g = detail::GlmSmoothGradient(DivergenceSpec::SquaredEuclidean(), x, z,
                                                      Regularization::None(), params, true);
  for (Eigen::Index j = 0; j < 8; ++j) {
    if (fit.weights[j] != 0.0) {
      EXPECT_NEAR(g[j], -lambda * (fit.weights[j] > 0 ? 1.0 : -1.0), 1e-6);
    } else {
      EXPECT_LE(std::abs(g[j]), lambda + 1e-6);
    }
  }
  EXPECT_NEAR(g[8], 0.0, 1e-6);
}

TEST(Glm, InputErrors) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(3, 2);
  x(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_RANKAGG_ERROR(FitGlm(DivergenceSpec::SquaredEuclidean(), x, Vec({1, 2, 3}),
                              Regularization::None()),
                       ErrorKind::kDomain);
  EXPECT_RANKAGG_ERROR(FitGlm(DivergenceSpec::SquaredEuclidean(), Eigen::MatrixXd::Ones(2, 2),
                              Vec({1, 2, 3}), Regularization::None()),
                       ErrorKind::kDimension);
  EXPECT_RANKAGG_ERROR(FitGlm(DivergenceSpec::GeneralizedI(), Eigen::MatrixXd::Ones(2, 1),
                              Vec({1, -2}), Regularization::None()),
                       ErrorKind::kDomain);
  EXPECT_RANKAGG_ERROR(FitGlm(DivergenceSpec::SquaredEuclidean(), Eigen::MatrixXd::Ones(2, 1),
                              Vec({1, 2}), Regularization::Ridge(-1.0)),
                       ErrorKind::kInvalidArgument);
}

TEST(Glm, CapHitReportsIterate) {
  // The optimum needs theta = 60, beyond the cap.
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(1, 1);
  try {
    FitGlm(DivergenceSpec::GeneralizedI(), x, Vec({std::exp(60.0)}), Regularization::None(),
           NoIntercept());
    ADD_FAILURE() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    ASSERT_EQ(e.iterate().size(), 1u);
    EXPECT_TRUE(std::isfinite(e.iterate()[0]));
  }
}

TEST(Glm, ParseRegularization) {
  EXPECT_EQ(ParseRegularizationKind("lasso"), Regularization::Kind::kLassoL1);
  EXPECT_EQ(ParseRegularizationKind("ridge"), Regularization::Kind::kRidgeL2);
  EXPECT_EQ(ParseRegularizationKind("none"), Regularization::Kind::kNone);
  EXPECT_FALSE(ParseRegularizationKind("elastic").has_value());
}

}  // namespace
}  // namespace rankagg
