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

#include "rankagg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "rankagg/error.hpp"

namespace rankagg {
namespace {

void CheckPair(const ScoreVector& a, const ScoreVector& b, const char* name) {
  if (a.size() != b.size()) {
    Fail(ErrorKind::kDimension, std::string(name) + ": length mismatch");
  }
  if (a.size() < 2) {
    Fail(ErrorKind::kInvalidArgument, std::string(name) + ": needs n >= 2");
  }
}

// Pairs tied within runs of equal keys along `idx`.
template <typename Eq>
std::int64_t TiedPairs(const std::vector<std::size_t>& idx, Eq equal) {
  std::int64_t total = 0;
  std::int64_t run = 1;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (equal(idx[k - 1], idx[k])) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total + run * (run - 1) / 2;
}

// Stable merge sort of idx by b, returning the number of swaps, i.e. pairs
// (i before j) with b[i] > b[j].
std::int64_t MergeCount(std::vector<std::size_t>& idx,
                        std::vector<std::size_t>& buf, const ScoreVector& b,
                        std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = MergeCount(idx, buf, b, lo, mid) +
                       MergeCount(idx, buf, b, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (b[static_cast<Eigen::Index>(idx[j])] <
        b[static_cast<Eigen::Index>(idx[i])]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = idx[j++];
    } else {
      buf[k++] = idx[i++];
    }
  }
  while (i < mid) buf[k++] = idx[i++];
  while (j < hi) buf[k++] = idx[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            idx.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

double Gain(int rel) { return std::exp2(static_cast<double>(rel)) - 1.0; }

double Discount(std::size_t position) {  // 1-based
  return 1.0 / std::log2(static_cast<double>(position) + 1.0);
}

}  // namespace

double KendallTau(const ScoreVector& a, const ScoreVector& b) {
  CheckPair(a, b, "kendall_tau");
  const auto n = static_cast<std::size_t>(a.size());
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    const auto xi = static_cast<Eigen::Index>(x);
    const auto yi = static_cast<Eigen::Index>(y);
    if (a[xi] != a[yi]) return a[xi] < a[yi];
    return b[xi] < b[yi];
  });
  auto eq_a = [&](std::size_t x, std::size_t y) {
    return a[static_cast<Eigen::Index>(x)] == a[static_cast<Eigen::Index>(y)];
  };
  auto eq_b = [&](std::size_t x, std::size_t y) {
    return b[static_cast<Eigen::Index>(x)] == b[static_cast<Eigen::Index>(y)];
  };
  const std::int64_t tied_a = TiedPairs(idx, eq_a);
  const std::int64_t tied_ab = TiedPairs(
      idx, [&](std::size_t x, std::size_t y) { return eq_a(x, y) && eq_b(x, y); });

  std::vector<std::size_t> buf(n);
  const std::int64_t swaps = MergeCount(idx, buf, b, 0, n);
  const std::int64_t tied_b = TiedPairs(idx, eq_b);

  const auto total = static_cast<std::int64_t>(n) *
                     static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t untied_a = total - tied_a;  // C + D + ties only in b
  const std::int64_t untied_b = total - tied_b;  // C + D + ties only in a
  if (untied_a == 0 || untied_b == 0) {
    Fail(ErrorKind::kUndefinedMetric,
         "kendall_tau: an argument is constant, tau is undefined");
  }
  const std::int64_t concordant_minus_discordant =
      total - tied_a - tied_b + tied_ab - 2 * swaps;
  return static_cast<double>(concordant_minus_discordant) /
         std::sqrt(static_cast<double>(untied_a) *
                   static_cast<double>(untied_b));
}

ScoreVector MidRanks(const ScoreVector& x) {
  const auto n = static_cast<std::size_t>(x.size());
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) {
    return x[static_cast<Eigen::Index>(p)] < x[static_cast<Eigen::Index>(q)];
  });
  ScoreVector ranks(x.size());
  std::size_t k = 0;
  while (k < n) {
    std::size_t end = k + 1;
    while (end < n && x[static_cast<Eigen::Index>(idx[end])] ==
                          x[static_cast<Eigen::Index>(idx[k])]) {
      ++end;
    }
    const double mean_rank = 0.5 * static_cast<double>(k + 1 + end);
    for (std::size_t t = k; t < end; ++t) {
      ranks[static_cast<Eigen::Index>(idx[t])] = mean_rank;
    }
    k = end;
  }
  return ranks;
}

double SpearmanRho(const ScoreVector& a, const ScoreVector& b) {
  CheckPair(a, b, "spearman_rho");
  const ScoreVector ra = MidRanks(a);
  const ScoreVector rb = MidRanks(b);
  const Eigen::ArrayXd da = ra.array() - ra.mean();
  const Eigen::ArrayXd db = rb.array() - rb.mean();
  const double va = (da * da).sum();
  const double vb = (db * db).sum();
  if (va == 0.0 || vb == 0.0) {
    Fail(ErrorKind::kUndefinedMetric,
         "spearman_rho: zero rank variance, rho is undefined");
  }
  return (da * db).sum() / std::sqrt(va * vb);
}

double IdealDcgAtK(std::span<const int> relevance, std::size_t k) {
  std::vector<int> sorted(relevance.begin(), relevance.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, sorted.size()); ++i) {
    dcg += Gain(sorted[i]) * Discount(i + 1);
  }
  return dcg;
}

double NdcgAtK(const ScoreVector& predicted, std::span<const int> relevance,
               std::size_t k) {
  const auto n = static_cast<std::size_t>(predicted.size());
  if (relevance.size() != n) {
    Fail(ErrorKind::kDimension, "ndcg: length mismatch");
  }
  if (k < 1 || k > n) {
    Fail(ErrorKind::kInvalidArgument, "ndcg: k = " + std::to_string(k) +
                                          " outside [1, " + std::to_string(n) +
                                          "]");
  }
  for (int r : relevance) {
    if (r < 0) Fail(ErrorKind::kInvalidArgument, "ndcg: negative relevance");
  }
  const double ideal = IdealDcgAtK(relevance, k);
  if (ideal == 0.0) return 0.0;

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) {
    return predicted[static_cast<Eigen::Index>(p)] >
           predicted[static_cast<Eigen::Index>(q)];
  });
  double dcg = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    dcg += Gain(relevance[idx[i]]) * Discount(i + 1);
  }
  return dcg / ideal;
}

MeanNdcg AverageNdcg(std::span<const QueryRanking> queries, std::size_t k) {
  MeanNdcg out;
  double sum = 0.0;
  for (const auto& q : queries) {
    const std::size_t kk = std::min(k, q.relevance.size());
    if (kk == 0 || IdealDcgAtK(q.relevance, kk) == 0.0) {
      ++out.skipped;
      continue;
    }
    sum += NdcgAtK(q.predicted, q.relevance, kk);
    ++out.used;
  }
  out.mean = out.used > 0 ? sum / static_cast<double>(out.used) : 0.0;
  return out;
}

}  // namespace rankagg
