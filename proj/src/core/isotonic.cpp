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

#include "rankagg/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rankagg/error.hpp"

namespace rankagg {
namespace {

struct Pool {
  double sum;  // of the pooled keys
  std::size_t count;
  double mean() const { return sum / static_cast<double>(count); }
};

double Objective(const DivergenceSpec& spec, const ScoreVector& fitted,
                 const ScoreVector& theta) {
  return MatchingLoss(spec, fitted, theta);
}

}  // namespace

namespace detail {

IsotonicSolution PavFitWithRule(const DivergenceSpec& spec,
                                const ScoreVector& natural_params,
                                const Ordering& constraint, PoolingRule rule) {
  spec.Validate();
  const auto n = static_cast<std::size_t>(natural_params.size());
  if (n != constraint.size()) {
    Fail(ErrorKind::kDimension,
         "pav_fit: " + std::to_string(n) + " natural parameters but the "
         "constraint covers " + std::to_string(constraint.size()) + " items");
  }
  // Checks finiteness and the exp-link cap in one pass.
  const ScoreVector means = InvGradPhi(spec, natural_params);

  IsotonicSolution sol;
  sol.spec = spec;
  sol.natural_params = natural_params;
  sol.constraint_blocks = constraint.block_count();
  sol.chain = constraint.RefinedChain(natural_params);

  // The PAV key is theta for the dual rule and the mean for the mutant.
  const ScoreVector& key =
      rule == PoolingRule::kDualMean ? natural_params : means;
  std::vector<Pool> pools;
  pools.reserve(n);
  for (std::size_t i : sol.chain) {
    pools.push_back({key[static_cast<Eigen::Index>(i)], 1});
    while (pools.size() > 1 &&
           pools[pools.size() - 2].mean() >= pools.back().mean()) {
      const Pool top = pools.back();
      pools.pop_back();
      pools.back().sum += top.sum;
      pools.back().count += top.count;
    }
  }

  sol.fitted.resize(static_cast<Eigen::Index>(n));
  std::vector<Ordering::Block> blocks;
  blocks.reserve(pools.size());
  std::size_t pos = 0;
  for (const Pool& p : pools) {
    const double value = rule == PoolingRule::kDualMean
                             ? link::Mean(spec.family, p.mean())
                             : p.mean();
    Ordering::Block block(sol.chain.begin() + static_cast<std::ptrdiff_t>(pos),
                          sol.chain.begin() +
                              static_cast<std::ptrdiff_t>(pos + p.count));
    for (std::size_t i : block) sol.fitted[static_cast<Eigen::Index>(i)] = value;
    std::sort(block.begin(), block.end());
    blocks.push_back(std::move(block));
    pos += p.count;
  }
  sol.induced_order = n == 0 ? Ordering() : Ordering(std::move(blocks));
  sol.objective = Objective(spec, sol.fitted, natural_params);
  return sol;
}

}  // namespace detail

IsotonicSolution PavFit(const DivergenceSpec& spec,
                        const ScoreVector& natural_params,
                        const Ordering& constraint) {
  return detail::PavFitWithRule(spec, natural_params, constraint,
                                detail::PoolingRule::kDualMean);
}

IsotonicSolution EnforceRangeMargin(IsotonicSolution sol, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    Fail(ErrorKind::kInvalidArgument, "range margin: epsilon must be positive");
  }
  if (sol.fitted.size() == 0) return sol;
  const double lo = sol.fitted.minCoeff();
  const double hi = sol.fitted.maxCoeff();
  if (hi - lo >= epsilon) return sol;
  if (sol.constraint_blocks <= 1) {
    Fail(ErrorKind::kDegenerate,
         "range margin: constraint ordering has a single block, so its "
         "extremes are undefined");
  }

  if (hi > lo) {
    const double mid = 0.5 * (hi + lo);
    const double scale = epsilon / (hi - lo);
    sol.fitted = ((sol.fitted.array() - mid) * scale + mid).matrix();
  } else {
    // Constant vector: detach the two ends of the chain.
    const auto first = static_cast<Eigen::Index>(sol.chain.front());
    const auto last = static_cast<Eigen::Index>(sol.chain.back());
    sol.fitted[first] = lo - 0.5 * epsilon;
    sol.fitted[last] = lo + 0.5 * epsilon;
    std::vector<Ordering::Block> blocks;
    blocks.push_back({sol.chain.front()});
    Ordering::Block middle(sol.chain.begin() + 1, sol.chain.end() - 1);
    std::sort(middle.begin(), middle.end());
    if (!middle.empty()) blocks.push_back(std::move(middle));
    blocks.push_back({sol.chain.back()});
    sol.induced_order = Ordering(std::move(blocks));
  }
  if (sol.spec.domain != Domain::kReals) {
    const double new_lo = sol.fitted.minCoeff();
    if (new_lo <= 0.0) sol.fitted.array() += epsilon - new_lo;
  }
  sol.objective = Objective(sol.spec, sol.fitted, sol.natural_params);
  sol.margin_applied = true;
  return sol;
}

}  // namespace rankagg
