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
#include <vector>

#include "rankagg/bregman.hpp"
#include "rankagg/ordering.hpp"

namespace rankagg {

// Order-constrained Bregman projection:
//
//   argmin_z  sum_i D(z_i || Mean(theta_i))   s.t. z nondecreasing along
//                                               the constraint ordering
//
// Items inside a constraint tie-block are first sorted by ascending theta,
// then pool-adjacent-violators runs over the resulting chain. A pooled block
// takes the value Mean(average theta of the block), which is the exact
// blockwise minimizer of the first-argument Bregman objective.
struct IsotonicSolution {
  DivergenceSpec spec;
  ScoreVector natural_params;
  ScoreVector fitted;
  // Pools of equal fitted values, in chain order.
  Ordering induced_order;
  // The refined total order PAV ran along.
  std::vector<std::size_t> chain;
  std::size_t constraint_blocks = 0;
  double objective = 0.0;
  bool margin_applied = false;
};

IsotonicSolution PavFit(const DivergenceSpec& spec,
                        const ScoreVector& natural_params,
                        const Ordering& constraint);

// Enforces fitted.max() - fitted.min() >= epsilon. When the range is short
// the vector is scaled about its midpoint to range exactly epsilon; a
// constant vector is split at the two ends of the chain instead. Throws
// kDegenerate when the constraint ordering had a single block.
IsotonicSolution EnforceRangeMargin(IsotonicSolution sol, double epsilon);

namespace detail {

enum class PoolingRule {
  kDualMean,
  // Arithmetic mean of the block's means. Wrong for exp-link families; only
  // the self-test uses it, to prove the oracle suite can tell.
  kPrimalMean,
};

IsotonicSolution PavFitWithRule(const DivergenceSpec& spec,
                                const ScoreVector& natural_params,
                                const Ordering& constraint, PoolingRule rule);

}  // namespace detail
}  // namespace rankagg
