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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rankagg/baselines.hpp"
#include "rankagg/bregman.hpp"
#include "rankagg/glm.hpp"
#include "rankagg/mr.hpp"
#include "rankagg/ordering.hpp"

namespace rankagg {

// Item features, one row per item.
using FeatureMatrix = Eigen::MatrixXd;

// What the Rank-Agg GLM sees of each rank list.
enum class ListScale {
  kScores,  // the expert scores themselves
  kRanks,   // mid-ranks divided by n
};

// How an inner MR run is started on outer iterations after the first.
enum class StartPolicy {
  kWarm,  // from the previous weights of the same side
  kCold,  // from the positions of the new target ordering
  kBest,  // both; keep the lower regularized cost
};

struct AggregationConfig {
  DivergenceSpec phi_r = DivergenceSpec::SquaredEuclidean();
  DivergenceSpec phi_z = DivergenceSpec::SquaredEuclidean();
  // Weight of the feature-side divergence in the coupled cost. The steps
  // themselves do not depend on it.
  double lambda = 1.0;
  double epsilon_margin = 1e-3;
  BaselineMethod init_method = BaselineMethod::kBorda;
  // Overrides init_method when set.
  std::optional<ScoreVector> initial_scores;
  Regularization reg_beta;
  Regularization reg_omega;
  double outer_tol = 1e-7;
  int outer_max_iter = 50;
  // Consecutive identical consensus orders that end the loop early.
  int stable_orders = 3;
  StartPolicy letor_start = StartPolicy::kWarm;
  StartPolicy rank_start = StartPolicy::kWarm;
  // tol, max_iter and glm are used; epsilon and reg come from above.
  MrOptions inner;
  ListScale list_scale = ListScale::kScores;
  // Floor for generalized-I rank-list columns.
  double positive_floor = 1e-6;
  // After the loop stops, rerun it from the order of the fitted rank-list
  // scores and keep the rerun when its final coupled cost is lower. Repeats
  // up to this many times; 0 disables.
  int covariate_restarts = 0;
};

void ValidateConfig(const AggregationConfig& cfg);

struct AggregationResult {
  ScoreVector r_bar;
  Eigen::VectorXd beta;
  double beta_intercept = 0.0;
  ScoreVector z_bar;
  Eigen::VectorXd omega;
  double omega_intercept = 0.0;
  // Total order; PositionScores() gives evaluation scores.
  Ordering consensus_order;
  Ordering initial_order;

  // D_r(r || Mean(R beta)) + lambda D_z(z || Mean(X omega)) after each outer
  // iteration, and its two parts.
  std::vector<double> coupled_cost_trace;
  std::vector<double> r_cost_trace;
  std::vector<double> z_cost_trace;
  // Coupled cost after every half step (LETOR step, then Rank-Agg step).
  std::vector<double> step_cost_trace;
  // 0-based outer iterations on which an inner range margin fired.
  std::vector<int> margin_iterations;

  // Per outer iteration: consensus order, and the partial orders of r and z.
  std::vector<Ordering> per_step_orders;
  std::vector<Ordering> r_orders;
  std::vector<Ordering> z_orders;

  int iterations = 0;
  bool converged = false;
  // Accepted covariate restarts. Traces, orders and initial_order describe
  // the last accepted run only.
  int restarts = 0;
  // Outer iterations over all runs, rejected restarts included.
  int total_iterations = 0;
  std::vector<double> rejected_restart_costs;
  std::string diagnostic;

  // The rank lists as fed to the Rank-Agg GLM.
  Eigen::MatrixXd preprocessed_lists;
};

// Column preprocessing for the rank-list GLM. Columns are optionally replaced
// by their mid-ranks over n, then z-scored for squared Euclidean, or scaled to
// unit maximum and shifted above the floor for the exp-link families. Throws
// kDegenerate on a constant column.
Eigen::MatrixXd PreprocessRankLists(const RankListMatrix& r,
                                    const DivergenceSpec& phi_r,
                                    ListScale scale = ListScale::kScores,
                                    double positive_floor = 1e-6);

AggregationResult MrRankAgg(const RankListMatrix& r, const FeatureMatrix& x,
                            const AggregationConfig& cfg);

// The fitted expert weights.
Eigen::VectorXd ExpertWeights(const AggregationResult& result);

struct PermutationStep {
  int iteration = 0;
  Ordering order;
  // Against the previous step; the first step compares to the initial order.
  double kendall_tau_to_previous = 1.0;
};

std::vector<PermutationStep> PermutationTrace(const AggregationResult& result);

}  // namespace rankagg
