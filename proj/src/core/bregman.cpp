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

#include "rankagg/bregman.hpp"

#include <cmath>
#include <string>

#include "rankagg/error.hpp"

namespace rankagg {
namespace {

// x log x with the continuous extension 0 log 0 = 0.
double XLogX(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void CheckSameLength(const ScoreVector& a, const ScoreVector& b) {
  if (a.size() != b.size()) {
    Fail(ErrorKind::kDimension, "divergence: length mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
  }
}

void CheckPositive(const ScoreVector& x, std::string_view what) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) {
      Fail(ErrorKind::kDomain, std::string(what) + ": entry " +
                                   std::to_string(i) + " = " +
                                   std::to_string(x[i]) + " is not positive");
    }
  }
}

}  // namespace

DivergenceSpec DivergenceSpec::For(Family family) {
  switch (family) {
    case Family::kSquaredEuclidean:
      return {family, Domain::kReals};
    case Family::kKL:
      return {family, Domain::kSimplex};
    case Family::kGeneralizedI:
      return {family, Domain::kPositiveOrthant};
  }
  Fail(ErrorKind::kInvalidArgument, "unknown family");
}

void DivergenceSpec::Validate() const {
  if (!(For(family) == *this)) {
    Fail(ErrorKind::kInvalidArgument,
         "divergence spec: domain does not match family " +
             std::string(FamilyName(family)));
  }
}

std::string_view FamilyName(Family family) {
  switch (family) {
    case Family::kSquaredEuclidean:
      return "squared_euclidean";
    case Family::kKL:
      return "kl";
    case Family::kGeneralizedI:
      return "generalized_i";
  }
  return "unknown";
}

std::optional<Family> ParseFamily(std::string_view name) {
  if (name == "squared_euclidean" || name == "gaussian" || name == "sq") {
    return Family::kSquaredEuclidean;
  }
  if (name == "kl") return Family::kKL;
  if (name == "generalized_i" || name == "gi" || name == "poisson") {
    return Family::kGeneralizedI;
  }
  return std::nullopt;
}

void CheckDomain(const DivergenceSpec& spec, const ScoreVector& x,
                 std::string_view what) {
  spec.Validate();
  switch (spec.domain) {
    case Domain::kReals:
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
          Fail(ErrorKind::kDomain, std::string(what) + ": entry " +
                                       std::to_string(i) + " is not finite");
        }
      }
      return;
    case Domain::kPositiveOrthant:
      CheckPositive(x, what);
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
          Fail(ErrorKind::kDomain, std::string(what) + ": entry " +
                                       std::to_string(i) + " is not finite");
        }
      }
      return;
    case Domain::kSimplex: {
      CheckPositive(x, what);
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] > 1.0) {
          Fail(ErrorKind::kDomain, std::string(what) + ": entry " +
                                       std::to_string(i) + " exceeds 1");
        }
      }
      const double sum = x.sum();
      if (std::abs(sum - 1.0) > kSimplexTolerance) {
        Fail(ErrorKind::kDomain, std::string(what) +
                                     ": not on the probability simplex (sum " +
                                     std::to_string(sum) + ")");
      }
      return;
    }
  }
}

double Phi(const DivergenceSpec& spec, const ScoreVector& x) {
  CheckDomain(spec, x, "phi");
  switch (spec.family) {
    case Family::kSquaredEuclidean:
      return 0.5 * x.squaredNorm();
    case Family::kKL:
      return x.unaryExpr(&XLogX).sum();
    case Family::kGeneralizedI:
      return x.unaryExpr(&XLogX).sum() - x.sum();
  }
  return 0.0;
}

ScoreVector GradPhi(const DivergenceSpec& spec, const ScoreVector& x) {
  spec.Validate();
  switch (spec.family) {
    case Family::kSquaredEuclidean:
      return x;
    case Family::kKL:
      CheckPositive(x, "grad_phi");
      return x.array().log() + 1.0;
    case Family::kGeneralizedI:
      CheckPositive(x, "grad_phi");
      return x.array().log();
  }
  return x;
}

ScoreVector InvGradPhi(const DivergenceSpec& spec, const ScoreVector& theta) {
  spec.Validate();
  if (!spec.exp_link()) return theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (!(std::abs(theta[i]) <= kNaturalParamCap)) {
      throw DivergenceError(
          "inv_grad_phi: natural parameter " + std::to_string(theta[i]) +
              " at index " + std::to_string(i) + " exceeds cap " +
              std::to_string(kNaturalParamCap),
          {theta.data(), theta.data() + theta.size()});
    }
  }
  ScoreVector out(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    out[i] = link::Mean(spec.family, theta[i]);
  }
  return out;
}

double Divergence(const DivergenceSpec& spec, const ScoreVector& y,
                  const ScoreVector& x) {
  CheckSameLength(y, x);
  CheckDomain(spec, y, "divergence (first argument)");
  CheckDomain(spec, x, "divergence (second argument)");
  switch (spec.family) {
    case Family::kSquaredEuclidean:
      return 0.5 * (y - x).squaredNorm();
    case Family::kKL: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        s += y[i] * std::log(y[i] / x[i]);
      }
      return s;
    }
    case Family::kGeneralizedI: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        s += y[i] * std::log(y[i] / x[i]) - y[i] + x[i];
      }
      return s;
    }
  }
  return 0.0;
}

namespace link {

double Mean(Family family, double theta) {
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

double Natural(Family family, double mean) {
  switch (family) {
    case Family::kSquaredEuclidean:
      return mean;
    case Family::kKL:
      return std::log(mean) + 1.0;
    case Family::kGeneralizedI:
      return std::log(mean);
  }
  return mean;
}

double MeanDerivative(Family family, double theta) {
  return family == Family::kSquaredEuclidean ? 1.0 : Mean(family, theta);
}

double PointLoss(Family family, double y, double theta) {
  switch (family) {
    case Family::kSquaredEuclidean: {
      const double r = y - theta;
      return 0.5 * r * r;
    }
    case Family::kKL:
      return XLogX(y) - y * theta + std::exp(theta - 1.0);
    case Family::kGeneralizedI:
      return XLogX(y) - y * theta - y + std::exp(theta);
  }
  return 0.0;
}

}  // namespace link

double MatchingLoss(const DivergenceSpec& spec, const ScoreVector& y,
                    const ScoreVector& theta) {
  CheckSameLength(y, theta);
  double s = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    s += link::PointLoss(spec.family, y[i], theta[i]);
  }
  return s;
}

}  // namespace rankagg
