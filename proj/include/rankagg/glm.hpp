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

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rankagg/bregman.hpp"

namespace rankagg {

struct Regularization {
  enum class Kind { kNone, kRidgeL2, kLassoL1 };

  Kind kind = Kind::kNone;
  double strength = 0.0;

  static Regularization None() { return {}; }
  static Regularization Ridge(double s) { return {Kind::kRidgeL2, s}; }
  static Regularization Lasso(double s) { return {Kind::kLassoL1, s}; }

  bool active() const noexcept { return kind != Kind::kNone && strength > 0.0; }
};

std::optional<Regularization::Kind> ParseRegularizationKind(std::string_view);
std::string_view RegularizationKindName(Regularization::Kind kind);

struct GlmOptions {
  // Stop when the relative decrease of the objective falls below tol.
  double tol = 1e-9;
  int max_iter = 200;
  // Sweep cap for the coordinate-descent subproblem of the lasso path.
  int cd_max_sweeps = 1000;
  // Appends an unpenalized all-ones column.
  bool intercept = true;
  // Warm start; zeros when absent.
  std::optional<Eigen::VectorXd> initial_weights;
  double initial_intercept = 0.0;
};

struct GlmFit {
  Eigen::VectorXd weights;  // one per design column
  double intercept = 0.0;
  // D(target || Mean(design * weights + intercept)).
  double objective = 0.0;
  // objective + penalty; this is what the solver descends.
  double penalized_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // penalized objective per iteration
};

// Fits argmin_w D(target || Mean(design w + b)) + penalty(w) with
// penalty = strength/2 |w|^2 (ridge) or strength |w|_1 (lasso).
GlmFit FitGlm(const DivergenceSpec& spec, const Eigen::MatrixXd& design,
              const ScoreVector& target, const Regularization& reg,
              const GlmOptions& opts = {});

// Natural parameters design * weights + intercept.
Eigen::VectorXd LinearPredictor(const Eigen::MatrixXd& design,
                                const Eigen::VectorXd& weights,
                                double intercept);

namespace detail {

// Smooth part of the objective (divergence plus ridge term) and its gradient
// with respect to [weights; intercept]. Lasso contributes nothing here.
double GlmSmoothObjective(const DivergenceSpec& spec,
                          const Eigen::MatrixXd& design,
                          const ScoreVector& target, const Regularization& reg,
                          const Eigen::VectorXd& params, bool intercept);

Eigen::VectorXd GlmSmoothGradient(const DivergenceSpec& spec,
                                  const Eigen::MatrixXd& design,
                                  const ScoreVector& target,
                                  const Regularization& reg,
                                  const Eigen::VectorXd& params,
                                  bool intercept);

}  // namespace detail
}  // namespace rankagg
