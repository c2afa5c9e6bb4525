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

#include "rankagg/aggregate.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>

#include <spdlog/spdlog.h>

#include "rankagg/error.hpp"
#include "rankagg/metrics.hpp"

namespace rankagg {
namespace {

double RelativeChange(double before, double after) {
  if (before == after) return 0.0;
  return std::abs(before - after) / std::max(std::abs(before), 1e-300);
}

// Runs one side of the alternation and prefixes errors with the step name.
MrResult RunSide(const char* step, int iteration, const DivergenceSpec& spec,
                 const Eigen::MatrixXd& design, const Ordering& target,
                 MrOptions opts, const MrResult* previous,
                 StartPolicy policy) {
  auto run = [&](bool warm) {
    opts.initial_weights.reset();
    if (warm) {
      opts.initial_weights = previous->weights;
      opts.initial_intercept = previous->intercept;
    }
    return Mr(spec, design, target, opts);
  };
  const std::string where = std::string("mr_rank_agg: ") + step +
                            " (outer iteration " + std::to_string(iteration) +
                            "): ";
  try {
    if (previous == nullptr || policy == StartPolicy::kCold) return run(false);
    if (policy == StartPolicy::kWarm) return run(true);
    MrResult warm = run(true);
    MrResult cold = run(false);
    return cold.regularized_trace.back() < warm.regularized_trace.back()
               ? std::move(cold)
               : std::move(warm);
  } catch (const DivergenceError& e) {
    throw DivergenceError(where + e.what(), e.iterate());
  } catch (const Error& e) {
    throw Error(e.kind(), where + e.what());
  }
}

}  // namespace

void ValidateConfig(const AggregationConfig& cfg) {
  cfg.phi_r.Validate();
  cfg.phi_z.Validate();
  if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda)) {
    Fail(ErrorKind::kInvalidArgument, "aggregation: lambda must be positive");
  }
  if (!(cfg.epsilon_margin > 0.0) || !std::isfinite(cfg.epsilon_margin)) {
    Fail(ErrorKind::kInvalidArgument,
         "aggregation: epsilon_margin must be positive");
  }
  if (cfg.outer_max_iter < 1 || cfg.inner.max_iter < 1) {
    Fail(ErrorKind::kInvalidArgument,
         "aggregation: iteration caps must be at least 1");
  }
  if (cfg.reg_beta.strength < 0.0 || cfg.reg_omega.strength < 0.0) {
    Fail(ErrorKind::kInvalidArgument,
         "aggregation: regularization strength must be nonnegative");
  }
  if (!(cfg.positive_floor > 0.0)) {
    Fail(ErrorKind::kInvalidArgument,
         "aggregation: positive_floor must be positive");
  }
}

Eigen::MatrixXd PreprocessRankLists(const RankListMatrix& r,
                                    const DivergenceSpec& phi_r,
                                    ListScale scale, double positive_floor) {
  if (!r.allFinite()) {
    Fail(ErrorKind::kDomain, "rank lists: non-finite entries");
  }
  Eigen::MatrixXd out = r;
  for (Eigen::Index k = 0; k < r.cols(); ++k) {
    auto col = out.col(k);
    const double lo = col.minCoeff();
    const double hi = col.maxCoeff();
    if (!(hi > lo)) {
      Fail(ErrorKind::kDegenerate, "rank lists: column " + std::to_string(k) +
                                       " is constant and carries no order");
    }
    if (scale == ListScale::kRanks) {
      col = MidRanks(col) / static_cast<double>(col.size());
    }
    if (!phi_r.exp_link()) {
      col.array() -= col.mean();
      col /= std::sqrt(col.squaredNorm() / static_cast<double>(col.size()));
      continue;
    }
    col /= col.cwiseAbs().maxCoeff();
    const double new_lo = col.minCoeff();
    if (new_lo < positive_floor) col.array() += positive_floor - new_lo;
  }
  return out;
}

namespace {

// The alternation itself, from a given starting order. Fills the traces and
// estimates of `out`.
void Alternate(const Eigen::MatrixXd& lists, const FeatureMatrix& x,
               const AggregationConfig& cfg, Ordering r_order,
               AggregationResult& out) {
  MrOptions z_opts = cfg.inner;
  z_opts.epsilon = cfg.epsilon_margin;
  z_opts.reg = cfg.reg_omega;
  MrOptions r_opts = cfg.inner;
  r_opts.epsilon = cfg.epsilon_margin;
  r_opts.reg = cfg.reg_beta;

  std::optional<MrResult> z_side;
  std::optional<MrResult> r_side;
  int stable = 0;
  for (int t = 0; t < cfg.outer_max_iter; ++t) {
    out.iterations = t + 1;
    MrResult z = RunSide("LETOR step", t, cfg.phi_z, x, r_order, z_opts,
                         z_side ? &*z_side : nullptr, cfg.letor_start);
    if (r_side) {
      out.step_cost_trace.push_back(r_side->cost() + cfg.lambda * z.cost());
    }
    MrResult rr = RunSide("Rank-Agg step", t, cfg.phi_r, lists,
                          z.induced_order, r_opts, r_side ? &*r_side : nullptr,
                          cfg.rank_start);
    out.step_cost_trace.push_back(rr.cost() + cfg.lambda * z.cost());
    if (!z.margin_iterations.empty() || !rr.margin_iterations.empty()) {
      out.margin_iterations.push_back(t);
    }

    const Ordering consensus =
        rr.induced_order.RefineBy(rr.Covariates(cfg.phi_r, lists));
    r_order = rr.induced_order;
    out.r_cost_trace.push_back(rr.cost());
    out.z_cost_trace.push_back(z.cost());
    out.coupled_cost_trace.push_back(rr.cost() + cfg.lambda * z.cost());
    out.z_orders.push_back(z.induced_order);
    out.r_orders.push_back(rr.induced_order);
    stable = !out.per_step_orders.empty() && out.per_step_orders.back() == consensus
                 ? stable + 1
                 : 1;
    out.per_step_orders.push_back(consensus);
    spdlog::debug("mr_rank_agg: iteration {} cost {:.6g} (r {:.6g}, z {:.6g}), "
                  "blocks r {} z {}",
                  t, out.coupled_cost_trace.back(), rr.cost(), z.cost(),
                  rr.induced_order.block_count(), z.induced_order.block_count());
    z_side = std::move(z);
    r_side = std::move(rr);

    if (r_order.block_count() <= 1) {
      out.diagnostic = "aggregate ranking collapsed to a single tie-block";
      break;
    }
    // Each part is tested on its own so the stopping point does not depend
    // on lambda.
    const std::size_t m = out.r_cost_trace.size();
    if (m > 1 &&
        std::max(RelativeChange(out.r_cost_trace[m - 2], out.r_cost_trace[m - 1]),
                 RelativeChange(out.z_cost_trace[m - 2], out.z_cost_trace[m - 1])) <
            cfg.outer_tol) {
      out.converged = true;
      break;
    }
    if (stable >= cfg.stable_orders) {
      out.converged = true;
      out.diagnostic = "consensus order stable for " +
                       std::to_string(cfg.stable_orders) + " iterations";
      break;
    }
  }
  if (!out.converged && out.diagnostic.empty()) {
    out.diagnostic = "outer iteration cap reached";
  }

  out.r_bar = r_side->retarget;
  out.beta = r_side->weights;
  out.beta_intercept = r_side->intercept;
  out.z_bar = z_side->retarget;
  out.omega = z_side->weights;
  out.omega_intercept = z_side->intercept;
  out.consensus_order = out.per_step_orders.back();
}

}  // namespace

AggregationResult MrRankAgg(const RankListMatrix& r, const FeatureMatrix& x,
                            const AggregationConfig& cfg) {
  ValidateConfig(cfg);
  if (r.rows() != x.rows()) {
    Fail(ErrorKind::kDimension,
         "mr_rank_agg: R has " + std::to_string(r.rows()) +
             " rows but X has " + std::to_string(x.rows()));
  }
  if (r.cols() < 1 || x.cols() < 1) {
    Fail(ErrorKind::kDimension, "mr_rank_agg: R and X need at least one column");
  }
  if (!x.allFinite()) {
    Fail(ErrorKind::kDomain, "mr_rank_agg: X has non-finite entries");
  }
  AggregationResult out;
  const auto n = static_cast<std::size_t>(r.rows());
  if (n <= 1) {
    out.diagnostic = "fewer than two items; nothing to aggregate";
    out.consensus_order = Ordering::SingleBlock(n);
    out.initial_order = out.consensus_order;
    return out;
  }
  out.preprocessed_lists = PreprocessRankLists(r, cfg.phi_r, cfg.list_scale,
                                                 cfg.positive_floor);

  ScoreVector init;
  if (cfg.initial_scores) {
    if (cfg.initial_scores->size() != r.rows()) {
      Fail(ErrorKind::kDimension, "mr_rank_agg: initial scores have wrong length");
    }
    init = *cfg.initial_scores;
  } else {
    init = RunBaseline(r, cfg.init_method);
  }
  out.initial_order = Ordering::FromScores(init);
  if (out.initial_order.block_count() <= 1) {
    out.diagnostic = "initial scores are constant; no order to start from";
    out.consensus_order = out.initial_order;
    return out;
  }
  Alternate(out.preprocessed_lists, x, cfg, out.initial_order, out);
  out.total_iterations = out.iterations;

  for (int k = 0; k < cfg.covariate_restarts; ++k) {
    const Ordering proposal = Ordering::FromScores(LinearPredictor(
        out.preprocessed_lists, out.beta, out.beta_intercept));
    if (proposal == out.consensus_order || proposal.block_count() <= 1) break;
    AggregationResult cand;
    cand.preprocessed_lists = out.preprocessed_lists;
    cand.initial_order = proposal;
    Alternate(cand.preprocessed_lists, x, cfg, proposal, cand);
    out.total_iterations += cand.iterations;
    const double before = out.coupled_cost_trace.back();
    const double after = cand.coupled_cost_trace.back();
    spdlog::debug("mr_rank_agg: restart {} cost {:.6g} -> {:.6g}", k, before,
                  after);
    if (!(after < before)) {
      out.rejected_restart_costs.push_back(after);
      break;
    }
    cand.restarts = out.restarts + 1;
    cand.rejected_restart_costs = std::move(out.rejected_restart_costs);
    cand.total_iterations = out.total_iterations;
    out = std::move(cand);
  }
  return out;
}

Eigen::VectorXd ExpertWeights(const AggregationResult& result) {
  return result.beta;
}

std::vector<PermutationStep> PermutationTrace(const AggregationResult& result) {
  std::vector<PermutationStep> trace;
  const Ordering* previous = &result.initial_order;
  for (std::size_t i = 0; i < result.per_step_orders.size(); ++i) {
    const Ordering& cur = result.per_step_orders[i];
    PermutationStep step{static_cast<int>(i), cur, 1.0};
    if (!(cur == *previous)) {
      try {
        step.kendall_tau_to_previous =
            KendallTau(previous->PositionScores(), cur.PositionScores());
      } catch (const Error&) {
        step.kendall_tau_to_previous = std::numeric_limits<double>::quiet_NaN();
      }
    }
    trace.push_back(std::move(step));
    previous = &cur;
  }
  return trace;
}

}  // namespace rankagg
