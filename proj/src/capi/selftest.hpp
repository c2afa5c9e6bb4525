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

#include <cstdint>

#include <json.hpp>

namespace rankagg::selftest {

struct Options {
  std::uint64_t seed = 0;
  // Swap the isotonic pooling rule for the primal mean.
  bool mutant_pooling = false;
};

struct Report {
  bool passed = true;
  nlohmann::json json;
};

Report Run(const Options& opts);

}  // namespace rankagg::selftest
