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

#include "rankagg/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "rankagg/error.hpp"
#include "rankagg/metrics.hpp"

namespace rankagg {
namespace {

constexpr std::array<std::pair<BaselineMethod, std::string_view>, 10> kNames{{
    {BaselineMethod::kBorda, "borda"},
    {BaselineMethod::kCombSum, "combsum"},
    {BaselineMethod::kCombMnz, "combmnz"},
    {BaselineMethod::kCombAnz, "combanz"},
    {BaselineMethod::kCombMin, "combmin"},
    {BaselineMethod::kCombMax, "combmax"},
    {BaselineMethod::kMc1, "mc1"},
    {BaselineMethod::kMc2, "mc2"},
    {BaselineMethod::kMc3, "mc3"},
    {BaselineMethod::kMc4, "mc4"},
}};

void CheckNonEmpty(const RankListMatrix& r, const char* what) {
  if (r.rows() < 1 || r.cols() < 1) {
    Fail(ErrorKind::kDimension, std::string(what) + ": empty rank-list matrix");
  }
}

// True when list k ranks j at least as high as i. Unretrieved (NaN) entries
// compare false.
bool AtLeast(const RankListMatrix& r, Eigen::Index k, Eigen::Index j,
             Eigen::Index i) {
  return r(j, k) >= r(i, k);
}

}  // namespace

std::string_view BaselineName(BaselineMethod method) {
  for (const auto& [m, name] : kNames) {
    if (m == method) return name;
  }
  return "unknown";
}

std::optional<BaselineMethod> ParseBaseline(std::string_view name) {
  for (const auto& [m, n] : kNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

ScoreVector Borda(const RankListMatrix& r) {
  CheckNonEmpty(r, "borda");
  if (!r.allFinite()) {
    Fail(ErrorKind::kDomain, "borda: rank lists must be finite");
  }
  ScoreVector s = ScoreVector::Zero(r.rows());
  for (Eigen::Index k = 0; k < r.cols(); ++k) {
    // A mid-rank minus one is the count of lower items plus half the ties.
    s.array() += MidRanks(r.col(k)).array() - 1.0;
  }
  return s / static_cast<double>(r.cols());
}

RankListMatrix NormalizeColumns(const RankListMatrix& r,
                                CombNormalization how) {
  if (how == CombNormalization::kNone) return r;
  RankListMatrix out = r;
  for (Eigen::Index k = 0; k < r.cols(); ++k) {
    if (how == CombNormalization::kRank) {
      out.col(k) = MidRanks(r.col(k)) / static_cast<double>(r.rows());
      continue;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      if (std::isfinite(r(i, k))) {
        lo = std::min(lo, r(i, k));
        hi = std::max(hi, r(i, k));
      }
    }
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      if (!std::isfinite(r(i, k))) continue;
      out(i, k) = hi > lo ? (r(i, k) - lo) / (hi - lo) : 0.5;
    }
  }
  return out;
}

ScoreVector Comb(const RankListMatrix& r, BaselineMethod kind) {
  CheckNonEmpty(r, "comb");
  ScoreVector s(r.rows());
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    int hits = 0;
    for (Eigen::Index k = 0; k < r.cols(); ++k) {
      const double v = r(i, k);
      if (!std::isfinite(v)) continue;
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ++hits;
    }
    switch (kind) {
      case BaselineMethod::kCombSum:
        s[i] = sum;
        break;
      case BaselineMethod::kCombMnz:
        s[i] = sum * hits;
        break;
      case BaselineMethod::kCombAnz:
        s[i] = hits > 0 ? sum / hits : 0.0;
        break;
      case BaselineMethod::kCombMin:
        s[i] = hits > 0 ? lo : 0.0;
        break;
      case BaselineMethod::kCombMax:
        s[i] = hits > 0 ? hi : 0.0;
        break;
      default:
        Fail(ErrorKind::kInvalidArgument,
             "comb: " + std::string(BaselineName(kind)) +
                 " is not a Comb method");
    }
  }
  return s;
}

Eigen::MatrixXd MarkovTransition(const RankListMatrix& r, BaselineMethod kind) {
  CheckNonEmpty(r, "markov_chain");
  const Eigen::Index n = r.rows();
  const Eigen::Index p = r.cols();
  const double dn = static_cast<double>(n);
  const double dp = static_cast<double>(p);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    switch (kind) {
      case BaselineMethod::kMc1: {
        // Uniform over the union of items some list ranks at least as high.
        int size = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
          bool any = j == i;
          for (Eigen::Index k = 0; k < p && !any; ++k) any = AtLeast(r, k, j, i);
          if (any) {
            t(i, j) = 1.0;
            ++size;
          }
        }
        t.row(i) /= static_cast<double>(size);
        break;
      }
      case BaselineMethod::kMc2: {
        // A uniform list, then a uniform item it ranks at least as high.
        for (Eigen::Index k = 0; k < p; ++k) {
          int size = 0;
          for (Eigen::Index j = 0; j < n; ++j) size += AtLeast(r, k, j, i);
          if (size == 0) {
            t(i, i) += 1.0 / dp;  // list did not retrieve i
            continue;
          }
          for (Eigen::Index j = 0; j < n; ++j) {
            if (AtLeast(r, k, j, i)) t(i, j) += 1.0 / (dp * size);
          }
        }
        break;
      }
      case BaselineMethod::kMc3: {
        // A uniform (list, item) pair; move if the list ranks it at least
        // as high, else stay.
        double moved = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (j == i) continue;
          int votes = 0;
          for (Eigen::Index k = 0; k < p; ++k) votes += AtLeast(r, k, j, i);
          t(i, j) = votes / (dp * dn);
          moved += t(i, j);
        }
        t(i, i) = 1.0 - moved;
        break;
      }
      case BaselineMethod::kMc4: {
        // A uniform item; move iff a strict majority ranks it at least as
        // high, else stay.
        double moved = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (j == i) continue;
          int votes = 0;
          for (Eigen::Index k = 0; k < p; ++k) votes += AtLeast(r, k, j, i);
          if (2 * votes > p) {
            t(i, j) = 1.0 / dn;
            moved += 1.0 / dn;
          }
        }
        t(i, i) = 1.0 - moved;
        break;
      }
      default:
        Fail(ErrorKind::kInvalidArgument,
             "markov_chain: " + std::string(BaselineName(kind)) +
                 " is not a Markov-chain method");
    }
  }
  return t;
}

constexpr double kMarkovGrid = 1e13;

ScoreVector MarkovChain(const RankListMatrix& r, BaselineMethod kind,
                        double damping, double tol) {
  if (r.rows() < 2) {
    Fail(ErrorKind::kInvalidArgument, "markov_chain: needs n >= 2");
  }
  if (!(damping >= 0.0 && damping <= 1.0)) {
    Fail(ErrorKind::kInvalidArgument, "markov_chain: damping outside [0, 1]");
  }
  const Eigen::Index n = r.rows();
  const Eigen::MatrixXd pt =
      (1.0 - damping) * MarkovTransition(r, kind).transpose();
  const double teleport = damping / static_cast<double>(n);
  ScoreVector pi = ScoreVector::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < kMarkovMaxIter; ++it) {
    ScoreVector next = pt * pi;
    next.array() += teleport * pi.sum();
    next /= next.sum();
    const double step = (next - pi).lpNorm<1>();
    pi = std::move(next);
    if (step < tol) {
      // Snap to a fixed grid so items that tie in exact arithmetic also tie
      // here, whatever the row order fed to the matrix products.
      for (auto& v : pi) v = std::round(v * kMarkovGrid) / kMarkovGrid;
      return pi;
    }
  }
  Fail(ErrorKind::kNonConvergence,
       "markov_chain: power iteration did not converge in " +
           std::to_string(kMarkovMaxIter) + " iterations");
}

ScoreVector RunBaseline(const RankListMatrix& r, BaselineMethod method,
                        CombNormalization comb_norm) {
  switch (method) {
    case BaselineMethod::kBorda:
      return Borda(r);
    case BaselineMethod::kCombSum:
    case BaselineMethod::kCombMnz:
    case BaselineMethod::kCombAnz:
    case BaselineMethod::kCombMin:
    case BaselineMethod::kCombMax:
      return Comb(NormalizeColumns(r, comb_norm), method);
    default:
      return MarkovChain(r, method);
  }
}

}  // namespace rankagg
