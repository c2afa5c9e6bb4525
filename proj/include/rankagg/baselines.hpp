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

#include <Eigen/Dense>

#include "rankagg/ordering.hpp"

namespace rankagg {

// Rank lists, one column per expert; higher score = ranked higher.
using RankListMatrix = Eigen::MatrixXd;

enum class BaselineMethod {
  kBorda,
  kCombSum,
  kCombMnz,
  kCombAnz,
  kCombMin,
  kCombMax,
  kMc1,
  kMc2,
  kMc3,
  kMc4,
};

std::string_view BaselineName(BaselineMethod method);
// Lower-case names as printed by BaselineName, e.g. "combmnz", "mc3".
std::optional<BaselineMethod> ParseBaseline(std::string_view name);

// Mean over lists of the number of items ranked strictly lower; each tied
// item contributes one half.
ScoreVector Borda(const RankListMatrix& r);

// Per-column score normalization applied before the Comb family.
enum class CombNormalization { kNone, kMinMax, kRank };

RankListMatrix NormalizeColumns(const RankListMatrix& r,
                                CombNormalization how);

// Comb fusion of already normalized scores. A finite entry counts as a
// retrieval; NaN marks an item the list did not return.
ScoreVector Comb(const RankListMatrix& r, BaselineMethod kind);

inline constexpr double kDefaultDamping = 0.05;
inline constexpr double kDefaultMarkovTol = 1e-10;
inline constexpr int kMarkovMaxIter = 100000;

// Row-stochastic transition matrix of MC1..MC4 before damping.
Eigen::MatrixXd MarkovTransition(const RankListMatrix& r, BaselineMethod kind);

// Stationary distribution of (1 - damping) P + damping / n, by power
// iteration from the uniform vector until the L1 step is below tol. Entries
// are rounded to a 1e-13 grid.
ScoreVector MarkovChain(const RankListMatrix& r, BaselineMethod kind,
                        double damping = kDefaultDamping,
                        double tol = kDefaultMarkovTol);

// Dispatches any baseline; Comb methods normalize with `comb_norm` first.
ScoreVector RunBaseline(const RankListMatrix& r, BaselineMethod method,
                        CombNormalization comb_norm = CombNormalization::kMinMax);

}  // namespace rankagg
