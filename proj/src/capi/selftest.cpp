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

// Built-in oracle checks. Every oracle here is written without the library's
// solvers: isotonic fits by enumeration, gradients by central differences,
// metrics by pair counting.

#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "rankagg/bregman.hpp"
#include "rankagg/error.hpp"
#include "rankagg/glm.hpp"
#include "rankagg/isotonic.hpp"
#include "rankagg/metrics.hpp"

namespace rankagg::selftest {
namespace {

using Rng = std::mt19937_64;

struct Check {
  std::string name;
  int cases = 0;
  int failures = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string first_failure;

  void Record(double error, const std::string& what) {
    ++cases;
    max_error = std::max(max_error, error);
    if (!(error <= tolerance)) {
      if (failures++ == 0) first_failure = what;
    }
  }
};

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// D(c || mu) written out per family.
double PointDivergence(Family family, double c, double mu) {
  if (family == Family::kSquaredEuclidean) return 0.5 * (c - mu) * (c - mu);
  return (c > 0.0 ? c * std::log(c / mu) : 0.0) - c + mu;
}

double MeanOf(Family family, double theta) {
  switch (family) {
    case Family::kSquaredEuclidean:
      return theta;
    case Family::kKL:
      return std::exp(theta - 1.0);
    case Family::kGeneralizedI:
      return std::exp(theta);
  }
  return theta;
}

// Golden-section minimum of a convex function on [lo, hi].
double GoldenMin(const std::function<double(double)>& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Minimum of sum_i D(z_i || mu_i) over z nondecreasing across the blocks,
// by enumerating chains consistent with the blocks and contiguous splits of
// each chain into constant segments.
double BruteIsotonic(Family family, const std::vector<double>& mu,
                     const std::vector<std::vector<std::size_t>>& blocks) {
  const std::size_t n = mu.size();
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<double> value(subsets), loss(subsets);
  for (std::size_t s = 1; s < subsets; ++s) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
      if (s >> i & 1) {
        lo = std::min(lo, mu[i]);
        hi = std::max(hi, mu[i]);
      }
    }
    auto f = [&](double c) {
      double t = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (s >> i & 1) t += PointDivergence(family, c, mu[i]);
      }
      return t;
    };
    value[s] = lo == hi ? lo : GoldenMin(f, lo, hi);
    loss[s] = f(value[s]);
  }

  std::vector<std::vector<std::size_t>> perms = blocks;
  for (auto& b : perms) std::sort(b.begin(), b.end());
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<std::size_t> chain;
    for (const auto& b : perms) chain.insert(chain.end(), b.begin(), b.end());
    for (std::size_t cuts = 0; cuts < (std::size_t{1} << (n - 1)); ++cuts) {
      double total = 0.0, last = -std::numeric_limits<double>::infinity();
      bool feasible = true;
      std::size_t mask = 0;
      for (std::size_t k = 0; k < n && feasible; ++k) {
        mask |= std::size_t{1} << chain[k];
        if (k + 1 == n || (cuts >> k & 1)) {
          if (value[mask] < last) feasible = false;
          last = value[mask];
          total += loss[mask];
          mask = 0;
        }
      }
      if (feasible) best = std::min(best, total);
    }
    // Next combination of within-block permutations.
    std::size_t b = 0;
    while (b < perms.size() && !std::next_permutation(perms[b].begin(), perms[b].end())) {
      ++b;
    }
    if (b == perms.size()) break;
  }
  return best;
}

std::vector<std::vector<std::size_t>> RandomBlocks(Rng& rng, std::size_t n) {
  std::vector<std::size_t> items(n);
  std::iota(items.begin(), items.end(), std::size_t{0});
  std::shuffle(items.begin(), items.end(), rng);
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < n; ++i) {
    if (blocks.empty() || UniformInt(rng, 0, 2) == 0) blocks.emplace_back();
    blocks.back().push_back(items[i]);
  }
  return blocks;
}

Check PavOracle(Rng& rng, Family family, int count, bool mutant) {
  Check c{"pav_oracle_" + std::string(FamilyName(family)), 0, 0, 0.0, 1e-6, {}};
  const auto spec = DivergenceSpec::For(family);
  for (int t = 0; t < count; ++t) {
    const auto n = static_cast<std::size_t>(UniformInt(rng, 1, 6));
    ScoreVector theta(static_cast<Eigen::Index>(n));
    std::vector<double> mu(n);
    for (std::size_t i = 0; i < n; ++i) {
      theta[static_cast<Eigen::Index>(i)] = Uniform(rng, -2.0, 2.0);
      mu[i] = MeanOf(family, theta[static_cast<Eigen::Index>(i)]);
    }
    const auto blocks = RandomBlocks(rng, n);
    const Ordering order(blocks);
    const auto sol = detail::PavFitWithRule(
        spec, theta, order,
        mutant ? detail::PoolingRule::kPrimalMean : detail::PoolingRule::kDualMean);
    double got = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      got += PointDivergence(family, sol.fitted[static_cast<Eigen::Index>(i)], mu[i]);
    }
    const double want = BruteIsotonic(family, mu, blocks);
    double err = std::abs(got - want);
    if (!order.IsNondecreasingAcrossBlocks(sol.fitted)) {
      err = std::numeric_limits<double>::infinity();
    }
    c.Record(err, "case " + std::to_string(t) + ": objective " +
                      std::to_string(got) + " vs oracle " + std::to_string(want));
  }
  return c;
}

Check GradientCheck(Rng& rng, int count) {
  Check c{"glm_gradient", 0, 0, 0.0, 1e-5, {}};
  const Family families[] = {Family::kSquaredEuclidean, Family::kKL,
                             Family::kGeneralizedI};
  for (int t = 0; t < count; ++t) {
    const Family family = families[t % 3];
    const auto spec = DivergenceSpec::For(family);
    const Eigen::Index n = UniformInt(rng, 3, 12), d = UniformInt(rng, 1, 4);
    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = Uniform(rng, -1.0, 1.0);
    ScoreVector y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = family == Family::kSquaredEuclidean ? Uniform(rng, -2.0, 2.0)
                                                 : Uniform(rng, 0.1, 3.0);
    }
    const Regularization reg = t % 2 ? Regularization::Ridge(Uniform(rng, 0.0, 1.0))
                                     : Regularization::None();
    Eigen::VectorXd p(d + 1);
    for (Eigen::Index j = 0; j <= d; ++j) p[j] = Uniform(rng, -0.5, 0.5);
    const Eigen::VectorXd g = detail::GlmSmoothGradient(spec, x, y, reg, p, true);
    double err = 0.0;
    for (Eigen::Index j = 0; j <= d; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(p[j]));
      Eigen::VectorXd a = p, b = p;
      a[j] += h;
      b[j] -= h;
      const double fd = (detail::GlmSmoothObjective(spec, x, y, reg, a, true) -
                         detail::GlmSmoothObjective(spec, x, y, reg, b, true)) /
                        (2.0 * h);
      err = std::max(err, std::abs(fd - g[j]) / std::max(1.0, std::abs(fd)));
    }
    c.Record(err, "case " + std::to_string(t) + " (" +
                      std::string(FamilyName(family)) + ")");
  }
  return c;
}

ScoreVector RandomTiedScores(Rng& rng, Eigen::Index n) {
  ScoreVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = UniformInt(rng, 0, 4);
  return v;
}

int Sign(double v) { return (v > 0.0) - (v < 0.0); }

double PairTau(const ScoreVector& a, const ScoreVector& b) {
  double s = 0.0, ta = 0.0, tb = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = i + 1; j < a.size(); ++j) {
      const int sa = Sign(a[i] - a[j]), sb = Sign(b[i] - b[j]);
      s += sa * sb;
      ta += sa != 0;
      tb += sb != 0;
    }
  }
  return s / std::sqrt(ta * tb);
}

ScoreVector CountRanks(const ScoreVector& v) {
  ScoreVector r(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double less = 0.0, equal = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      less += v[j] < v[i];
      equal += v[j] == v[i];
    }
    r[i] = less + (equal + 1.0) / 2.0;
  }
  return r;
}

double PearsonRho(const ScoreVector& a, const ScoreVector& b) {
  const ScoreVector ra = CountRanks(a), rb = CountRanks(b);
  const Eigen::ArrayXd da = ra.array() - ra.mean(), db = rb.array() - rb.mean();
  return (da * db).sum() / std::sqrt((da * da).sum() * (db * db).sum());
}

double SortNdcg(const ScoreVector& pred, const std::vector<int>& rel, std::size_t k) {
  std::vector<std::size_t> idx(rel.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) {
    return pred[static_cast<Eigen::Index>(p)] > pred[static_cast<Eigen::Index>(q)];
  });
  std::vector<int> ideal = rel;
  std::sort(ideal.rbegin(), ideal.rend());
  double dcg = 0.0, idcg = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    dcg += (std::pow(2.0, rel[idx[i]]) - 1.0) / std::log2(i + 2.0);
    idcg += (std::pow(2.0, ideal[i]) - 1.0) / std::log2(i + 2.0);
  }
  return idcg == 0.0 ? 0.0 : dcg / idcg;
}

std::vector<Check> MetricOracles(Rng& rng, int count) {
  Check tau{"kendall_tau_oracle", 0, 0, 0.0, 1e-12, {}};
  Check rho{"spearman_rho_oracle", 0, 0, 0.0, 1e-12, {}};
  Check ndcg{"ndcg_oracle", 0, 0, 0.0, 1e-12, {}};
  for (int t = 0; t < count; ++t) {
    const Eigen::Index n = UniformInt(rng, 2, 7);
    ScoreVector a = RandomTiedScores(rng, n), b = RandomTiedScores(rng, n);
    if (a.maxCoeff() == a.minCoeff()) a[0] += 1.0;
    if (b.maxCoeff() == b.minCoeff()) b[0] += 1.0;
    const std::string what = "case " + std::to_string(t);
    tau.Record(std::abs(KendallTau(a, b) - PairTau(a, b)), what);
    rho.Record(std::abs(SpearmanRho(a, b) - PearsonRho(a, b)), what);
    std::vector<int> rel(static_cast<std::size_t>(n));
    for (auto& r : rel) r = UniformInt(rng, 0, 3);
    const auto k = static_cast<std::size_t>(UniformInt(rng, 1, static_cast<int>(n)));
    ndcg.Record(std::abs(NdcgAtK(a, rel, k) - SortNdcg(a, rel, k)), what);
  }
  return {tau, rho, ndcg};
}

nlohmann::json ToJson(const Check& c) {
  nlohmann::json j = {{"name", c.name},           {"cases", c.cases},
                      {"failures", c.failures},   {"max_error", c.max_error},
                      {"tolerance", c.tolerance}, {"passed", c.failures == 0}};
  if (c.failures > 0) j["first_failure"] = c.first_failure;
  return j;
}

}  // namespace

Report Run(const Options& opts) {
  Rng rng(opts.seed);
  std::vector<Check> checks;
  for (Family f : {Family::kSquaredEuclidean, Family::kKL, Family::kGeneralizedI}) {
    checks.push_back(PavOracle(rng, f, 200, opts.mutant_pooling));
  }
  checks.push_back(GradientCheck(rng, 60));
  for (auto& c : MetricOracles(rng, 200)) checks.push_back(std::move(c));

  Report report;
  report.json["seed"] = opts.seed;
  report.json["mutant_pooling"] = opts.mutant_pooling;
  report.json["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    report.passed = report.passed && c.failures == 0;
    report.json["checks"].push_back(ToJson(c));
  }
  report.json["passed"] = report.passed;
  return report;
}

}  // namespace rankagg::selftest
