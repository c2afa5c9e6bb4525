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

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rankagg/rankagg.h"

int main(int argc, char** argv) {
  using namespace rankagg_cli;
  CLI::App app{"Rank aggregation with monotone retargeting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rankagg_version());

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "run a synthetic recovery experiment");
  s->add_option("--config", synth.config, "INI file")->required()->check(CLI::ExistingFile);
  s->add_option("--output", synth.output, "directory for the CSV files");
  s->add_option("--seed", synth.seed, "overrides the config seed")->check(CLI::NonNegativeNumber);
  s->add_option("--jobs", synth.jobs, "concurrent seeds")->check(CLI::PositiveNumber);

  AggregateArgs agg;
  auto* a = app.add_subcommand("aggregate", "aggregate the rank lists of a LETOR file");
  a->add_option("dataset", agg.dataset, "LETOR file")->required()->check(CLI::ExistingFile);
  a->add_option("--columns", agg.columns, "mq, ohsumed or x=..;r=..");
  a->add_option("--methods", agg.methods, "comma list, see --help")
      ->delimiter(',')
      ->default_str("mr,borda,combmnz");
  a->add_option("--output", agg.output, "directory for the CSV files");
  a->add_option("--augment", agg.augment, "LETOR or scores file whose values become an extra list")
      ->check(CLI::ExistingFile);
  a->add_option("--config", agg.config, "INI file with aggregation keys")
      ->check(CLI::ExistingFile);
  a->add_option("--jobs", agg.jobs, "concurrent queries")->check(CLI::PositiveNumber);

  SelftestArgs st;
  auto* t = app.add_subcommand("selftest", "run the built-in oracle checks");
  t->add_flag("--json", st.json, "print a JSON report");
  t->add_option("--seed", st.seed, "seed of the random instances");
  t->add_option("--output", st.output, "directory for selftest.csv");
  t->add_flag("--mutant-pooling", st.mutant_pooling,
              "use a wrong pooling rule; the checks must fail")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (agg.methods.empty()) agg.methods = {"mr", "borda", "combmnz"};

  if (*s) return RunSynth(synth);
  if (*a) return RunAggregate(agg);
  return RunSelftest(st);
}
