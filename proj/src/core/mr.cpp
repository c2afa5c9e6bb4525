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

#include "rankagg/mr.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <spdlog/spdlog.h>

#include "rankagg/error.hpp"
#include "rankagg/isotonic.hpp"

namespace rankagg {
namespace {

// Block positions of the ordering, standardized, mapped to the mean space.
ScoreVector PositionStart(const DivergenceSpec& spec, const Ordering& order) {
  ScoreVector z = order.PositionScores();
  z.array() -= z.mean();
  const double sd = std::sqrt(z.squaredNorm() / static_cast<double>(z.size()));
  if (sd > 0.0) z /= sd;
  if (spec.exp_link()) z = z.array().exp();
  return z;
}

struct Iterate {
  ScoreVector retarget;
  Eigen::VectorXd weights;
  double intercept = 0.0;
  Ordering induced_order;
  double regularized = 0.0;
};

}  // namespace

double Penalty(const Regularization& reg, const Eigen::VectorXd& weights) {
  switch (reg.kind) {
    case Regularization::Kind::kNone:
      return 0.0;
    case Regularization::Kind::kRidgeL2:
      return 0.5 * reg.strength * weights.squaredNorm();
    case Regularization::Kind::kLassoL1:
      return reg.strength * weights.lpNorm<1>();
  }
  return 0.0;
}

ScoreVector MrResult::Covariates(const DivergenceSpec& spec,
                                 const Eigen::MatrixXd& design) const {
  return InvGradPhi(spec, LinearPredictor(design, weights, intercept));
}

MrResult Mr(const DivergenceSpec& spec, const Eigen::MatrixXd& design,
            const Ordering& target_order, const MrOptions& opts) {
  spec.Validate();
  const auto n = static_cast<std::size_t>(design.rows());
  if (target_order.size() != n) {
    Fail(ErrorKind::kDimension,
         "mr: target ordering covers " + std::to_string(target_order.size()) +
             " items but the design has " + std::to_string(n) + " rows");
  }
  if (opts.epsilon <= 0.0) {
    Fail(ErrorKind::kInvalidArgument, "mr: epsilon must be positive");
  }

  MrResult out;
  out.weights = Eigen::VectorXd::Zero(design.cols());
  if (n <= 1) {
    out.retarget = ScoreVector::Constant(static_cast<Eigen::Index>(n),
                                         spec.exp_link() ? 1.0 : 0.0);
    out.induced_order = Ordering::SingleBlock(n);
    out.converged = true;
    return out;
  }

  GlmOptions glm = opts.glm;
  if (opts.initial_weights) {
    out.weights = *opts.initial_weights;
    out.intercept = opts.initial_intercept;
  } else {
    const GlmFit start =
        FitGlm(spec, design, PositionStart(spec, target_order), opts.reg, glm);
    out.weights = start.weights;
    out.intercept = start.intercept;
  }

  const bool margin = target_order.block_count() > 1;
  Iterate best;
  bool have_best = false;
  for (int it = 0; it < opts.max_iter; ++it) {
    out.iterations = it + 1;
    const ScoreVector theta =
        LinearPredictor(design, out.weights, out.intercept);
    IsotonicSolution sol = PavFit(spec, theta, target_order);
    if (margin) {
      sol = EnforceRangeMargin(std::move(sol), opts.epsilon);
      if (sol.margin_applied) {
        out.margin_iterations.push_back(it);
        spdlog::debug("mr: range margin applied at iteration {}", it);
      }
    }

    glm.initial_weights = out.weights;
    glm.initial_intercept = out.intercept;
    const GlmFit fit = FitGlm(spec, design, sol.fitted, opts.reg, glm);
    out.weights = fit.weights;
    out.intercept = fit.intercept;
    out.retarget = std::move(sol.fitted);
    out.induced_order = std::move(sol.induced_order);
    out.cost_trace.push_back(fit.objective);
    out.regularized_trace.push_back(fit.penalized_objective);

    if (!have_best || fit.penalized_objective < best.regularized) {
      best = {out.retarget, out.weights, out.intercept, out.induced_order,
              fit.penalized_objective};
      have_best = true;
    }
    const std::size_t m = out.cost_trace.size();
    if (fit.objective == 0.0 ||
        (m > 1 && std::abs(out.cost_trace[m - 2] - fit.objective) <=
                      opts.tol * std::max(out.cost_trace[m - 2], 1e-300))) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged && have_best) {
    spdlog::debug("mr: no convergence in {} iterations", opts.max_iter);
    out.retarget = std::move(best.retarget);
    out.weights = std::move(best.weights);
    out.intercept = best.intercept;
    out.induced_order = std::move(best.induced_order);
  }
  return out;
}

Ordering ExtractTotalOrder(const MrResult& result,
                           const ScoreVector& covariate_scores) {
  return result.induced_order.RefineBy(covariate_scores);
}

}  // namespace rankagg
