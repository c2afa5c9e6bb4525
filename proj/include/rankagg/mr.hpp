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

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rankagg/bregman.hpp"
#include "rankagg/glm.hpp"
#include "rankagg/ordering.hpp"

namespace rankagg {

struct MrOptions {
  double tol = 1e-8;
  int max_iter = 100;
  // Range margin applied after every PAV step.
  double epsilon = 1e-3;
  Regularization reg;
  GlmOptions glm;
  // Warm start. When present the first PAV step runs on design * weights +
  // intercept; otherwise the retarget starts from standardized block
  // positions of the target ordering and the weights from a GLM fit to it.
  std::optional<Eigen::VectorXd> initial_weights;
  double initial_intercept = 0.0;
};

struct MrResult {
  ScoreVector retarget;  // z
  Eigen::VectorXd weights;
  double intercept = 0.0;
  Ordering induced_order;
  // Unregularized divergence D(z || Mean(design w + b)) after each GLM step.
  std::vector<double> cost_trace;
  // Same, plus the penalty; this is the quantity the alternation descends.
  std::vector<double> regularized_trace;
  // 0-based iterations on which the range margin rescaled the retarget.
  std::vector<int> margin_iterations;
  int iterations = 0;
  bool converged = false;

  double cost() const { return cost_trace.empty() ? 0.0 : cost_trace.back(); }
  // Mean(design * weights + intercept).
  ScoreVector Covariates(const DivergenceSpec& spec,
                         const Eigen::MatrixXd& design) const;
};

// Monotone retargeting: alternates the order-constrained projection of the
// current fit onto the target ordering and a GLM refit to the projection.
MrResult Mr(const DivergenceSpec& spec, const Eigen::MatrixXd& design,
            const Ordering& target_order, const MrOptions& opts = {});

// Refines the induced tie-blocks by ascending covariate score, lower index
// first on exact ties.
Ordering ExtractTotalOrder(const MrResult& result,
                           const ScoreVector& covariate_scores);

// Penalty term of a regularizer at the given weights.
double Penalty(const Regularization& reg, const Eigen::VectorXd& weights);

}  // namespace rankagg
