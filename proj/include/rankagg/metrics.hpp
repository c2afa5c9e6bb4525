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
#include <span>
#include <vector>

#include "rankagg/ordering.hpp"

namespace rankagg {

// Kendall's tau-b. Ties in either argument are corrected for, so two vectors
// with the same weak ordering score exactly 1. Runs in O(n log n). Throws
// kUndefinedMetric when either side is constant.
double KendallTau(const ScoreVector& a, const ScoreVector& b);

// Pearson correlation of the mid-rank vectors.
double SpearmanRho(const ScoreVector& a, const ScoreVector& b);

// Average (1-based) ranks, ties sharing the mean rank.
ScoreVector MidRanks(const ScoreVector& x);

// NDCG@k with gain 2^rel - 1 and discount log2(i + 1). Items are ranked by
// descending predicted score, lower index first on ties. Returns 0 when every
// relevance grade is 0.
double NdcgAtK(const ScoreVector& predicted, std::span<const int> relevance,
               std::size_t k);

// Ideal DCG@k of a relevance vector.
double IdealDcgAtK(std::span<const int> relevance, std::size_t k);

struct QueryRanking {
  ScoreVector predicted;
  std::vector<int> relevance;
};

struct MeanNdcg {
  double mean = 0.0;
  std::size_t used = 0;
  // Queries whose ideal DCG is 0; they do not enter the mean.
  std::size_t skipped = 0;
};

// Arithmetic mean of per-query NDCG@k. k is clamped to each query's size.
MeanNdcg AverageNdcg(std::span<const QueryRanking> queries, std::size_t k);

}  // namespace rankagg
