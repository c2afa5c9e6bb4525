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

#include "rankagg/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rankagg/error.hpp"

namespace rankagg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Added to the Newton system so collinear designs stay solvable.
constexpr double kRidgeFloor = 1e-10;
constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;

// The design with the optional all-ones column appended.
Eigen::MatrixXd Augment(const Eigen::MatrixXd& design, bool intercept) {
  if (!intercept) return design;
  Eigen::MatrixXd a(design.rows(), design.cols() + 1);
  a.leftCols(design.cols()) = design;
  a.col(design.cols()).setOnes();
  return a;
}

// Number of leading entries of the parameter vector that are penalized.
Eigen::Index Penalized(const Eigen::MatrixXd& design) { return design.cols(); }

bool WithinCap(const DivergenceSpec& spec, const Eigen::VectorXd& theta) {
  if (!spec.exp_link()) return theta.allFinite();
  return theta.allFinite() && theta.cwiseAbs().maxCoeff() <= kNaturalParamCap;
}

class Problem {
 public:
  Problem(const DivergenceSpec& spec, const Eigen::MatrixXd& design,
          const ScoreVector& target, const Regularization& reg, bool intercept)
      : spec_(spec),
        a_(Augment(design, intercept)),
        y_(target),
        reg_(reg),
        npen_(Penalized(design)) {}

  const Eigen::MatrixXd& a() const { return a_; }
  Eigen::Index npen() const { return npen_; }

  // Divergence part; +inf outside the cap.
  double Loss(const Eigen::VectorXd& v, Eigen::VectorXd* theta_out = nullptr) const {
    Eigen::VectorXd theta = a_ * v;
    if (!WithinCap(spec_, theta)) {
      if (theta_out) *theta_out = std::move(theta);
      return kInf;
    }
    const double loss = MatchingLoss(spec_, y_, theta);
    if (theta_out) *theta_out = std::move(theta);
    return loss;
  }

  double Ridge(const Eigen::VectorXd& v) const {
    if (reg_.kind != Regularization::Kind::kRidgeL2) return 0.0;
    return 0.5 * reg_.strength * v.head(npen_).squaredNorm();
  }

  double L1(const Eigen::VectorXd& v) const {
    if (reg_.kind != Regularization::Kind::kLassoL1) return 0.0;
    return reg_.strength * v.head(npen_).lpNorm<1>();
  }

  double Smooth(const Eigen::VectorXd& v) const { return Loss(v) + Ridge(v); }

  Eigen::VectorXd SmoothGradient(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd theta = a_ * v;
    Eigen::VectorXd resid(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      resid[i] = link::Mean(spec_.family, theta[i]) - y_[i];
    }
    Eigen::VectorXd g = a_.transpose() * resid;
    if (reg_.kind == Regularization::Kind::kRidgeL2) {
      g.head(npen_) += reg_.strength * v.head(npen_);
    }
    return g;
  }

  Eigen::MatrixXd SmoothHessian(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd theta = a_ * v;
    Eigen::VectorXd w(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      w[i] = link::MeanDerivative(spec_.family, theta[i]);
    }
    Eigen::MatrixXd h = a_.transpose() * w.asDiagonal() * a_;
    if (reg_.kind == Regularization::Kind::kRidgeL2) {
      h.diagonal().head(npen_).array() += reg_.strength;
    }
    h.diagonal().array() += kRidgeFloor;
    return h;
  }

 private:
  DivergenceSpec spec_;
  Eigen::MatrixXd a_;
  ScoreVector y_;
  Regularization reg_;
  Eigen::Index npen_;
};

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

[[noreturn]] void CapFailure(const Eigen::VectorXd& iterate) {
  throw DivergenceError(
      "fit_glm: iterates diverge, natural parameters exceed the cap of " +
          std::to_string(kNaturalParamCap),
      ToStd(iterate));
}

// Damped Newton for the smooth objectives (no penalty or ridge).
void Newton(const Problem& p, const GlmOptions& opts, Eigen::VectorXd& v,
            GlmFit& fit) {
  double f = p.Smooth(v);
  if (!std::isfinite(f)) CapFailure(v);
  fit.trace.push_back(f);
  for (int it = 0; it < opts.max_iter; ++it) {
    fit.iterations = it + 1;
    const Eigen::VectorXd g = p.SmoothGradient(v);
    const Eigen::VectorXd step = p.SmoothHessian(v).ldlt().solve(g);
    const double slope = g.dot(step);
    if (!(slope > 0.0)) {  // already stationary up to round-off
      fit.converged = true;
      break;
    }
    double t = 1.0;
    bool cap_hit = false;
    Eigen::VectorXd trial;
    double ft = kInf;
    while (t >= kMinStep) {
      trial = v - t * step;
      ft = p.Smooth(trial);
      if (!std::isfinite(ft)) cap_hit = true;
      if (ft <= f - kArmijo * t * slope) break;
      t *= 0.5;
    }
    if (t < kMinStep) {
      if (cap_hit && slope > 1e-12 * (1.0 + std::abs(f))) CapFailure(v - step);
      fit.converged = true;  // no representable decrease left
      break;
    }
    const double rel = (f - ft) / std::max(std::abs(f), 1e-300);
    v = std::move(trial);
    f = ft;
    fit.trace.push_back(f);
    if (rel < opts.tol || f == 0.0) {
      fit.converged = true;
      break;
    }
  }
}

// Largest violation of the lasso optimality conditions at v.
double KktResidual(const Eigen::VectorXd& g, const Eigen::VectorXd& v,
                   double lambda, Eigen::Index npen) {
  double r = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    double rj;
    if (j >= npen) {
      rj = std::abs(g[j]);
    } else if (v[j] != 0.0) {
      rj = std::abs(g[j] + std::copysign(lambda, v[j]));
    } else {
      rj = std::max(std::abs(g[j]) - lambda, 0.0);
    }
    r = std::max(r, rj);
  }
  return r;
}

// Minimizes the quadratic model g'd + d'Hd/2 + lambda |v + d|_1 (penalized
// entries only) by cyclic coordinate descent. Returns v + d.
Eigen::VectorXd LassoModelStep(const Eigen::VectorXd& g, const Eigen::MatrixXd& h,
                               const Eigen::VectorXd& v, double lambda,
                               Eigen::Index npen, int max_sweeps) {
  Eigen::VectorXd u = v;
  Eigen::VectorXd hd = Eigen::VectorXd::Zero(v.size());  // H (u - v)
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double biggest = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      const double hjj = h(j, j);
      const double c = g[j] + hd[j] - hjj * (u[j] - v[j]);
      double next = v[j] - c / hjj;
      if (j < npen) {
        const double a = std::abs(next) - lambda / hjj;
        next = a > 0.0 ? std::copysign(a, next) : 0.0;
      }
      const double delta = next - u[j];
      if (delta == 0.0) continue;
      hd += delta * h.col(j);
      u[j] = next;
      biggest = std::max(biggest, std::abs(delta));
    }
    if (biggest <= 1e-13 * scale) break;
  }
  return u;
}

// Proximal Newton: coordinate descent on a local quadratic model, then a
// backtracking line search on the full objective.
void ProximalNewton(const Problem& p, const GlmOptions& opts,
                    const double lambda, Eigen::VectorXd& v, GlmFit& fit) {
  const Eigen::Index npen = p.npen();
  auto l1 = [&](const Eigen::VectorXd& x) {
    return lambda * x.head(npen).lpNorm<1>();
  };
  double f = p.Smooth(v) + l1(v);
  if (!std::isfinite(f)) CapFailure(v);
  fit.trace.push_back(f);
  const double scale =
      std::max(1.0, p.SmoothGradient(Eigen::VectorXd::Zero(v.size()))
                        .cwiseAbs()
                        .maxCoeff());

  for (int it = 0; it < opts.max_iter; ++it) {
    fit.iterations = it + 1;
    const Eigen::VectorXd g = p.SmoothGradient(v);
    if (KktResidual(g, v, lambda, npen) <= 1e-9 * scale) {
      fit.converged = true;
      break;
    }
    const Eigen::VectorXd u =
        LassoModelStep(g, p.SmoothHessian(v), v, lambda, npen, opts.cd_max_sweeps);
    const Eigen::VectorXd d = u - v;
    const double decrease = g.dot(d) + l1(u) - l1(v);
    if (!(decrease < 0.0)) {
      fit.converged = true;
      break;
    }
    double t = 1.0;
    bool cap_hit = false;
    Eigen::VectorXd trial;
    double ft = kInf;
    while (t >= kMinStep) {
      trial = v + t * d;
      ft = p.Smooth(trial) + l1(trial);
      if (!std::isfinite(ft)) cap_hit = true;
      if (ft <= f + kArmijo * t * decrease) break;
      t *= 0.5;
    }
    if (t < kMinStep) {
      if (cap_hit && -decrease > 1e-12 * (1.0 + std::abs(f))) CapFailure(u);
      fit.converged = true;
      break;
    }
    const double rel = (f - ft) / std::max(std::abs(f), 1e-300);
    v = std::move(trial);
    f = ft;
    fit.trace.push_back(f);
    if (rel < opts.tol &&
        KktResidual(p.SmoothGradient(v), v, lambda, npen) <= 1e-7 * scale) {
      fit.converged = true;
      break;
    }
  }
}

void CheckInputs(const DivergenceSpec& spec, const Eigen::MatrixXd& design,
                 const ScoreVector& target) {
  spec.Validate();
  if (design.rows() < 1 || design.cols() < 1) {
    Fail(ErrorKind::kDimension, "fit_glm: design must be at least 1x1");
  }
  if (design.rows() != target.size()) {
    Fail(ErrorKind::kDimension,
         "fit_glm: design has " + std::to_string(design.rows()) +
             " rows but target has " + std::to_string(target.size()));
  }
  if (!design.allFinite()) {
    Fail(ErrorKind::kDomain, "fit_glm: design has non-finite entries");
  }
  // Targets of the exp-link families only need to be positive; the simplex
  // constraint of KL is not enforced on regression targets.
  if (spec.exp_link()) {
    CheckDomain(DivergenceSpec::GeneralizedI(), target, "fit_glm target");
  } else {
    CheckDomain(spec, target, "fit_glm target");
  }
}

}  // namespace

std::optional<Regularization::Kind> ParseRegularizationKind(
    std::string_view name) {
  if (name == "none") return Regularization::Kind::kNone;
  if (name == "ridge" || name == "l2") return Regularization::Kind::kRidgeL2;
  if (name == "lasso" || name == "l1") return Regularization::Kind::kLassoL1;
  return std::nullopt;
}

std::string_view RegularizationKindName(Regularization::Kind kind) {
  switch (kind) {
    case Regularization::Kind::kNone:
      return "none";
    case Regularization::Kind::kRidgeL2:
      return "ridge";
    case Regularization::Kind::kLassoL1:
      return "lasso";
  }
  return "none";
}

Eigen::VectorXd LinearPredictor(const Eigen::MatrixXd& design,
                                const Eigen::VectorXd& weights,
                                double intercept) {
  return (design * weights).array() + intercept;
}

GlmFit FitGlm(const DivergenceSpec& spec, const Eigen::MatrixXd& design,
              const ScoreVector& target, const Regularization& reg,
              const GlmOptions& opts) {
  CheckInputs(spec, design, target);
  if (reg.strength < 0.0 || !std::isfinite(reg.strength)) {
    Fail(ErrorKind::kInvalidArgument, "fit_glm: negative regularization");
  }
  const Problem problem(spec, design, target, reg, opts.intercept);
  const Eigen::Index m = design.cols();

  Eigen::VectorXd v = Eigen::VectorXd::Zero(problem.a().cols());
  if (opts.initial_weights) {
    if (opts.initial_weights->size() != m) {
      Fail(ErrorKind::kDimension, "fit_glm: warm start has wrong length");
    }
    v.head(m) = *opts.initial_weights;
    if (opts.intercept) v[m] = opts.initial_intercept;
    // A warm start outside the cap falls back to zeros.
    if (!std::isfinite(problem.Loss(v))) v.setZero();
  }

  GlmFit fit;
  if (reg.kind == Regularization::Kind::kLassoL1 && reg.strength > 0.0) {
    ProximalNewton(problem, opts, reg.strength, v, fit);
  } else {
    Newton(problem, opts, v, fit);
  }
  fit.weights = v.head(m);
  fit.intercept = opts.intercept ? v[m] : 0.0;
  fit.objective = problem.Loss(v);
  fit.penalized_objective = fit.objective + problem.Ridge(v) + problem.L1(v);
  return fit;
}

namespace detail {

double GlmSmoothObjective(const DivergenceSpec& spec,
                          const Eigen::MatrixXd& design,
                          const ScoreVector& target, const Regularization& reg,
                          const Eigen::VectorXd& params, bool intercept) {
  return Problem(spec, design, target, reg, intercept).Smooth(params);
}

Eigen::VectorXd GlmSmoothGradient(const DivergenceSpec& spec,
                                  const Eigen::MatrixXd& design,
                                  const ScoreVector& target,
                                  const Regularization& reg,
                                  const Eigen::VectorXd& params,
                                  bool intercept) {
  return Problem(spec, design, target, reg, intercept).SmoothGradient(params);
}

}  // namespace detail
}  // namespace rankagg
