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
#include <string>
#include <vector>

namespace rankagg_cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct SynthArgs {
  std::string config;
  std::string output = ".";
  std::int64_t seed = -1;  // -1: use the config's seed
  int jobs = 1;
};

struct AggregateArgs {
  std::string dataset;
  std::string columns = "mq";
  std::vector<std::string> methods;
  std::string output = ".";
  std::string augment;
  std::string config;
  int jobs = 1;
};

struct SelftestArgs {
  bool json = false;
  bool mutant_pooling = false;
  std::uint64_t seed = 0;
  std::string output;
};

int RunSynth(const SynthArgs& args);
int RunAggregate(const AggregateArgs& args);
int RunSelftest(const SelftestArgs& args);

}  // namespace rankagg_cli
