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

// Bregman divergences and the matching GLM link functions for three
// families:
//
//   family             phi(x)                 grad phi     inverse link
//   SquaredEuclidean   1/2 |x|^2              x            theta
//   KL (simplex)       sum x log x            1 + log x    exp(theta - 1)
//   GeneralizedI (R+)  sum x log x - x        log x        exp(theta)
//
// All functions are pure.

#include <optional>
#include <string>
#include <string_view>

#include "rankagg/ordering.hpp"

namespace rankagg {

enum class Family { kSquaredEuclidean, kKL, kGeneralizedI };

enum class Domain { kReals, kSimplex, kPositiveOrthant };

// Largest |theta| accepted by the exp-link families.
inline constexpr double kNaturalParamCap = 50.0;

// Tolerance on sum(x) == 1 for membership of the probability simplex.
inline constexpr double kSimplexTolerance = 1e-8;

struct DivergenceSpec {
  Family family = Family::kSquaredEuclidean;
  Domain domain = Domain::kReals;

  // The DivergenceSpec with the domain that goes with `family`.
  static DivergenceSpec For(Family family);
  static DivergenceSpec SquaredEuclidean() { return For(Family::kSquaredEuclidean); }
  static DivergenceSpec KL() { return For(Family::kKL); }
  static DivergenceSpec GeneralizedI() { return For(Family::kGeneralizedI); }

  // Throws kInvalidArgument when family and domain do not match.
  void Validate() const;

  bool exp_link() const noexcept { return family != Family::kSquaredEuclidean; }

  friend bool operator==(const DivergenceSpec&, const DivergenceSpec&) = default;
};

std::string_view FamilyName(Family family);

// Accepts "squared_euclidean"/"gaussian", "kl", "generalized_i"/"gi"/"poisson".
std::optional<Family> ParseFamily(std::string_view name);

double Phi(const DivergenceSpec& spec, const ScoreVector& x);
ScoreVector GradPhi(const DivergenceSpec& spec, const ScoreVector& x);

// Throws DivergenceError when an exp-link family sees |theta| > cap.
ScoreVector InvGradPhi(const DivergenceSpec& spec, const ScoreVector& theta);

// D(y || x) from the closed forms. Both arguments must lie in the domain.
double Divergence(const DivergenceSpec& spec, const ScoreVector& y,
                  const ScoreVector& x);

// Throws kDomain unless every entry of x is admissible for `spec`.
void CheckDomain(const DivergenceSpec& spec, const ScoreVector& x,
                 std::string_view what);

// Scalar helpers used by the solvers. For the exp-link families the
// divergence is evaluated in its positive-orthant extension
// sum(y log(y/mu) - y + mu), which coincides with the closed form on the
// simplex and lets the GLM and isotonic steps run on unnormalized vectors.
namespace link {

double Mean(Family family, double theta);
double Natural(Family family, double mean);
// d mean / d theta.
double MeanDerivative(Family family, double theta);
// D(y || Mean(theta)) for one coordinate, without cap checks.
double PointLoss(Family family, double y, double theta);

}  // namespace link

// sum_i D(y_i || Mean(theta_i)); no cap checks.
double MatchingLoss(const DivergenceSpec& spec, const ScoreVector& y,
                    const ScoreVector& theta);

}  // namespace rankagg
