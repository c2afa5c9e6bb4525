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

// Recovery settings shared by the aggregate tests and the acceptance run.
// They mirror data/configs/gauss-recovery.ini and poisson-recovery.ini.

#pragma once

#include <cstdint>

#include "rankagg/aggregate.hpp"
#include "rankagg/data.hpp"

namespace rankagg::testing {

inline SyntheticSpec RecoverySpec(Family family, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.family = DivergenceSpec::For(family);
  spec.seed = seed;
  return spec;
}

inline AggregationConfig RecoveryConfig(Family family) {
  AggregationConfig cfg;
  cfg.phi_r = cfg.phi_z = DivergenceSpec::For(family);
  cfg.epsilon_margin = 1.0;
  cfg.outer_max_iter = 12;
  cfg.covariate_restarts = 3;
  if (family == Family::kSquaredEuclidean) {
    cfg.reg_beta = Regularization::Lasso(0.3);
  } else {
    cfg.reg_beta = Regularization::Lasso(1.0);
    cfg.list_scale = ListScale::kRanks;
  }
  return cfg;
}

}  // namespace rankagg::testing
