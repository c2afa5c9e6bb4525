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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "rankagg/aggregate.hpp"
#include "rankagg/baselines.hpp"
#include "rankagg/data.hpp"
#include "rankagg/glm.hpp"
#include "rankagg/isotonic.hpp"
#include "rankagg/metrics.hpp"
#include "rankagg/mr.hpp"
#include "recovery.hpp"

namespace fs = std::filesystem;
using namespace rankagg;

namespace {

constexpr int kSeeds = 10;
constexpr int kSeedsRequired = 8;
constexpr double kRecoveryTol = 1e-9;
constexpr int kMaxOuterIterations = 25;
constexpr double kMaxSeconds = 60.0;
constexpr double kNdcgTol = 1e-12;
constexpr std::size_t kNdcgDepth = 10;
constexpr std::size_t kAugmentK = 5;
constexpr int kPavCases = 500;
constexpr double kPavTol = 1e-6;
constexpr double kDescentTol = 1e-9;
constexpr int kMetricCases = 200;
constexpr double kMetricTol = 1e-12;
constexpr double kNormalEqTol = 1e-8;
constexpr double kPlantedTol = 1e-8;
constexpr double kGradientTol = 1e-5;

const BaselineMethod kBaselines[] = {
    BaselineMethod::kBorda,   BaselineMethod::kCombSum, BaselineMethod::kCombMnz,
    BaselineMethod::kCombAnz, BaselineMethod::kCombMin, BaselineMethod::kCombMax,
    BaselineMethod::kMc1,     BaselineMethod::kMc2,     BaselineMethod::kMc3,
    BaselineMethod::kMc4,
};

int failures = 0;

void Report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

bool Recovered(double tau, double rho) {
  return tau >= 1.0 - kRecoveryTol && rho >= 1.0 - kRecoveryTol;
}

// Largest increase between consecutive entries, skipping listed indices.
double WorstIncrease(const std::vector<double>& trace, const std::vector<int>& exempt) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < trace.size(); ++k) {
    if (std::find(exempt.begin(), exempt.end(), static_cast<int>(k)) != exempt.end()) continue;
    worst = std::max(worst, trace[k] - trace[k - 1]);
  }
  return worst;
}

struct Descent {
  int traces = 0;
  int violations = 0;
  int exempt_steps = 0;
  double worst = -std::numeric_limits<double>::infinity();

  void Add(const std::vector<double>& trace, const std::vector<int>& exempt) {
    ++traces;
    for (int e : exempt) exempt_steps += e > 0;
    const double w = WorstIncrease(trace, exempt);
    worst = std::max(worst, w);
    if (w > kDescentTol) ++violations;
  }
};

struct SeedRun {
  std::uint64_t seed = 0;
  double tau = 0.0, rho = 0.0, seconds = 0.0;
  int iterations = 0;
  bool recovered = false;
  bool every_baseline_fails = true;
  std::string baseline_hits;
  bool mr_ndcg_perfect = true;
  bool every_baseline_below = true;
  std::string baseline_top_hits;
};

SeedRun RunSeed(Family family, std::uint64_t seed, Descent& descent) {
  SeedRun s;
  s.seed = seed;
  const SyntheticInstance inst = GenerateSynthetic(testing::RecoverySpec(family, seed));
  const AggregationConfig cfg = testing::RecoveryConfig(family);
  const auto start = std::chrono::steady_clock::now();
  const AggregationResult res = MrRankAgg(inst.group.r, inst.group.x, cfg);
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const ScoreVector mr = res.consensus_order.PositionScores();
  s.tau = KendallTau(mr, inst.true_scores);
  s.rho = SpearmanRho(mr, inst.true_scores);
  s.iterations = res.total_iterations;
  s.recovered = Recovered(s.tau, s.rho) && s.iterations <= kMaxOuterIterations &&
                s.seconds < kMaxSeconds;
  descent.Add(res.coupled_cost_trace, res.margin_iterations);

  // The two inner problems on their own, against the true ordering.
  const Ordering truth = Ordering::FromScores(inst.true_scores);
  MrOptions z_opts = cfg.inner;
  z_opts.epsilon = cfg.epsilon_margin;
  z_opts.reg = cfg.reg_omega;
  const MrResult z = Mr(cfg.phi_z, inst.group.x, truth, z_opts);
  descent.Add(z.regularized_trace, z.margin_iterations);
  MrOptions r_opts = z_opts;
  r_opts.reg = cfg.reg_beta;
  const MrResult r = Mr(cfg.phi_r, res.preprocessed_lists, truth, r_opts);
  descent.Add(r.regularized_trace, r.margin_iterations);

  const std::vector<int>& rel = *inst.group.relevance;
  for (std::size_t k = 1; k <= kNdcgDepth; ++k) {
    if (NdcgAtK(mr, rel, k) < 1.0 - kNdcgTol) s.mr_ndcg_perfect = false;
  }
  for (BaselineMethod m : kBaselines) {
    const ScoreVector b = RunBaseline(inst.group.r, m);
    if (Recovered(KendallTau(b, inst.true_scores), 1.0)) {
      s.every_baseline_fails = false;
      s.baseline_hits += std::string(BaselineName(m)) + " ";
    }
    bool below = false;
    for (std::size_t k = 1; k <= kNdcgDepth; ++k) {
      below = below || NdcgAtK(b, rel, k) < 1.0 - kNdcgTol;
    }
    if (!below) {
      s.every_baseline_below = false;
      s.baseline_top_hits += std::string(BaselineName(m)) + " ";
    }
  }
  return s;
}

struct FamilyRuns {
  std::vector<SeedRun> seeds;
  int recovered = 0;
  int baselines_fail = 0;
};

FamilyRuns RunFamily(Family family, Descent& descent) {
  FamilyRuns out;
  for (int seed = 0; seed < kSeeds; ++seed) {
    SeedRun s = RunSeed(family, static_cast<std::uint64_t>(seed), descent);
    std::printf("  %-18s seed %d  tau %.12f  rho %.12f  iterations %2d  %.2fs%s\n",
                std::string(FamilyName(family)).c_str(), seed, s.tau, s.rho, s.iterations,
                s.seconds, s.baseline_hits.empty() ? "" : ("  baseline recovered: " + s.baseline_hits).c_str());
    if (!s.baseline_top_hits.empty()) {
      std::printf("    NDCG@1..%zu = 1 for: %s\n", kNdcgDepth, s.baseline_top_hits.c_str());
    }
    out.recovered += s.recovered;
    out.baselines_fail += s.every_baseline_fails;
    out.seeds.push_back(std::move(s));
  }
  return out;
}

std::string RecoveryDetail(const FamilyRuns& f) {
  double worst_tau = 1.0, worst_seconds = 0.0;
  int worst_iter = 0;
  for (const auto& s : f.seeds) {
    worst_tau = std::min(worst_tau, s.tau);
    worst_seconds = std::max(worst_seconds, s.seconds);
    worst_iter = std::max(worst_iter, s.iterations);
  }
  return fmt::format("recovered {}/{} seeds (need {}), min tau {:.6f}, max iterations {}, "
                     "max runtime {:.2f}s",
                     f.recovered, kSeeds, kSeedsRequired, worst_tau, worst_iter, worst_seconds);
}

void Criterion4(const FamilyRuns& gauss, const FamilyRuns& poisson) {
  int instances = 0, ok = 0;
  for (const FamilyRuns* f : {&gauss, &poisson}) {
    for (const auto& s : f->seeds) {
      if (!s.recovered) continue;
      ++instances;
      ok += s.mr_ndcg_perfect && s.every_baseline_below;
    }
  }
  Report(4, instances > 0 && ok == instances,
         fmt::format("{}/{} recovered instances with MR NDCG@1..{} = 1 and every baseline < 1 "
                     "at some K",
                     ok, instances, kNdcgDepth));
}

double MeanNdcgAt(const std::vector<QueryGroup>& groups,
                  const std::function<ScoreVector(const QueryGroup&)>& score) {
  std::vector<QueryRanking> q;
  for (const auto& g : groups) q.push_back({score(g), *g.relevance});
  return AverageNdcg(q, kAugmentK).mean;
}

void Criterion5() {
  LetorOptions opts;
  opts.columns = ColumnMap::Mq();
  const auto groups = ParseLetorFile(std::string(RANKAGG_DATA) + "/fixtures/mini_letor.txt", opts);
  std::vector<QueryGroup> augmented;
  for (const auto& g : groups) {
    ScoreVector grades(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      grades[static_cast<Eigen::Index>(i)] = (*g.relevance)[i];
    }
    augmented.push_back(AugmentWithQualityList(g, grades));
  }
  // Same settings as data/configs/letor-augment.ini.
  AggregationConfig cfg;
  cfg.reg_beta = Regularization::Lasso(0.3);
  cfg.epsilon_margin = 1.0;
  auto mr = [&](const QueryGroup& g) {
    return MrRankAgg(g.r, g.x, cfg).consensus_order.PositionScores();
  };
  auto mnz = [](const QueryGroup& g) { return RunBaseline(g.r, BaselineMethod::kCombMnz); };
  const double mr_gain = MeanNdcgAt(augmented, mr) - MeanNdcgAt(groups, mr);
  const double mnz_change = MeanNdcgAt(augmented, mnz) - MeanNdcgAt(groups, mnz);
  Report(5, mr_gain > 0.0 && std::abs(mnz_change) < mr_gain,
         fmt::format("NDCG@{} change with the oracle list: MR {:+.4f}, CombMNZ {:+.4f}", kAugmentK,
                     mr_gain, mnz_change));
}

void Criterion6() {
  std::mt19937_64 rng(600);
  std::uniform_int_distribution<std::size_t> size(1, 6);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < kPavCases; ++t) {
    const std::size_t n = size(rng);
    ScoreVector theta(static_cast<Eigen::Index>(n));
    std::vector<double> mu(n);
    for (std::size_t i = 0; i < n; ++i) mu[i] = theta[static_cast<Eigen::Index>(i)] = g(rng);
    const auto blocks = oracle::RandomBlocks(rng, n);
    const auto sol = PavFit(DivergenceSpec::SquaredEuclidean(), theta, Ordering(blocks));
    worst = std::max(worst, std::abs(sol.objective - oracle::BruteIsotonic(oracle::Fam::kSe, mu, blocks).objective));
  }
  Report(6, worst <= kPavTol,
         fmt::format("{} cases, max objective gap {:.3g} (tol {:g})", kPavCases, worst, kPavTol));
}

void Criterion8() {
  std::mt19937_64 rng(800);
  std::uniform_int_distribution<int> size(2, 7), level(0, 3);
  double worst = 0.0;
  int cases = 0;
  while (cases < kMetricCases) {
    const int n = size(rng);
    ScoreVector a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = level(rng);
      b[i] = level(rng);
    }
    if (a.maxCoeff() == a.minCoeff() || b.maxCoeff() == b.minCoeff()) continue;
    ++cases;
    worst = std::max(worst, std::abs(KendallTau(a, b) - oracle::Tau(a, b)));
    worst = std::max(worst, std::abs(SpearmanRho(a, b) - oracle::Rho(a, b)));
    std::vector<int> rel(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rel[static_cast<std::size_t>(i)] = static_cast<int>(b[i]);
    for (std::size_t k = 1; k <= static_cast<std::size_t>(n); ++k) {
      worst = std::max(worst, std::abs(NdcgAtK(a, rel, k) - oracle::Ndcg(a, rel, k)));
    }
  }
  Report(8, worst <= kMetricTol,
         fmt::format("{} cases, max deviation {:.3g} (tol {:g})", cases, worst, kMetricTol));
}

void Criterion9() {
  std::mt19937_64 rng(900);
  std::normal_distribution<double> g(0.0, 1.0);
  auto matrix = [&](Eigen::Index n, Eigen::Index m, double scale) {
    Eigen::MatrixXd x(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < m; ++j) x(i, j) = scale * g(rng);
    return x;
  };
  auto vector = [&](Eigen::Index n, double scale) {
    Eigen::VectorXd v(n);
    for (auto& e : v) e = scale * g(rng);
    return v;
  };

  double normal_gap = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXd x = matrix(80, 6, 1.0);
    const Eigen::VectorXd z = vector(80, 2.0);
    const GlmFit fit = FitGlm(DivergenceSpec::SquaredEuclidean(), x, z, Regularization::None());
    Eigen::MatrixXd a(80, 7);
    a << x, Eigen::VectorXd::Ones(80);
    const Eigen::VectorXd ref = (a.transpose() * a).ldlt().solve(a.transpose() * z);
    Eigen::VectorXd got(7);
    got << fit.weights, fit.intercept;
    normal_gap = std::max(normal_gap, (got - ref).cwiseAbs().maxCoeff());
  }

  double planted = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXd x = matrix(100, 5, 0.5);
    const ScoreVector target = (x * vector(5, 1.0)).array().exp().matrix();
    planted = std::max(planted,
                       FitGlm(DivergenceSpec::GeneralizedI(), x, target, Regularization::None()).objective);
  }

  double grad = 0.0;
  for (Family f : {Family::kSquaredEuclidean, Family::kKL, Family::kGeneralizedI}) {
    const auto spec = DivergenceSpec::For(f);
    for (int t = 0; t < 20; ++t) {
      const Eigen::MatrixXd x = matrix(30, 4, 0.5);
      ScoreVector target = vector(30, 1.0);
      if (spec.exp_link()) target = target.array().exp().matrix();
      const Eigen::VectorXd params = vector(5, 0.5);
      const Regularization reg = Regularization::Ridge(0.2);
      const Eigen::VectorXd an = detail::GlmSmoothGradient(spec, x, target, reg, params, true);
      auto obj = [&](const Eigen::VectorXd& v) {
        return detail::GlmSmoothObjective(spec, x, target, reg, v, true);
      };
      for (Eigen::Index j = 0; j < params.size(); ++j) {
        const double fd = oracle::CentralDiff(obj, params, j, 1e-6);
        grad = std::max(grad, std::abs(an[j] - fd) / std::max(1.0, std::abs(fd)));
      }
    }
  }
  Report(9, normal_gap <= kNormalEqTol && planted < kPlantedTol && grad <= kGradientTol,
         fmt::format("normal equations gap {:.3g}, planted GI objective {:.3g}, "
                     "gradient relative error {:.3g}",
                     normal_gap, planted, grad));
}

int Shell(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void Criterion10() {
  const fs::path root = fs::temp_directory_path() / "rankagg_acceptance";
  fs::remove_all(root);
  const std::string cli = RANKAGG_CLI;
  const std::string data = RANKAGG_DATA;
  struct Command {
    std::string name;
    std::string args;
    std::vector<std::string> files;
  };
  const std::vector<Command> commands = {
      {"synth", "synth --config " + data + "/configs/gauss-recovery.ini --seed 3",
       {"synth_trace.csv", "synth_ndcg.csv", "synth_summary.csv"}},
      {"aggregate",
       "aggregate " + data + "/fixtures/mini_letor.txt --config " + data +
           "/configs/letor-augment.ini --methods mr,borda,combmnz,mc4 --augment " + data +
           "/fixtures/mini_letor.txt",
       {"aggregate_queries.csv", "aggregate_ndcg.csv"}},
      {"selftest", "selftest --seed 5", {"selftest.csv"}},
  };
  int identical = 0, total = 0;
  std::string bad;
  for (const auto& c : commands) {
    std::vector<std::string> outputs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path dir = root / (c.name + std::to_string(run));
      fs::create_directories(dir);
      if (Shell(cli + " " + c.args + " --output " + dir.string()) != 0) bad += c.name + "(exit) ";
      for (const auto& f : c.files) outputs[run].push_back(Slurp(dir / f));
    }
    for (std::size_t i = 0; i < c.files.size(); ++i) {
      ++total;
      if (outputs[0][i] == outputs[1][i] && !outputs[0][i].empty()) {
        ++identical;
      } else {
        bad += c.files[i] + " ";
      }
    }
  }
  fs::remove_all(root);
  Report(10, identical == total && bad.empty(),
         fmt::format("{}/{} CSV files byte-identical across two runs{}", identical, total,
                     bad.empty() ? "" : " (differs: " + bad + ")"));
}

}  // namespace

int main() {
  Descent descent;
  const FamilyRuns gauss = RunFamily(Family::kSquaredEuclidean, descent);
  Report(1, gauss.recovered >= kSeedsRequired, RecoveryDetail(gauss));
  const FamilyRuns poisson = RunFamily(Family::kGeneralizedI, descent);
  Report(2, poisson.recovered >= kSeedsRequired, RecoveryDetail(poisson));
  Report(3, gauss.baselines_fail >= kSeedsRequired && poisson.baselines_fail >= kSeedsRequired,
         fmt::format("every baseline misses on {}/{} gaussian and {}/{} poisson seeds (need {})",
                     gauss.baselines_fail, kSeeds, poisson.baselines_fail, kSeeds,
                     kSeedsRequired));
  Criterion4(gauss, poisson);
  Criterion5();
  Criterion6();
  Report(7, descent.violations == 0,
         fmt::format("{} traces, {} with an increase above {:g}, worst step {:.3g}, "
                     "{} margin steps exempt",
                     descent.traces, descent.violations, kDescentTol, descent.worst,
                     descent.exempt_steps));
  Criterion8();
  Criterion9();
  Criterion10();
  std::printf("%s\n", failures == 0 ? "all criteria passed" : "some criteria failed");
  return failures == 0 ? 0 : 1;
}
