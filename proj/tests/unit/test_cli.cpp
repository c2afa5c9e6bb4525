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

// Runs the rankagg executable end to end.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string output;  // stdout and stderr
};

Outcome Exec(const std::string& args) {
  const std::string cmd = std::string(RANKAGG_CLI) + " " + args + " 2>&1";
  Outcome r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p) != nullptr) r.output += buf.data();
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// CSV rows without the leading comment line and the column header.
std::vector<std::vector<std::string>> Rows(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rankagg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Out(const std::string& name) {
    const fs::path p = dir_ / name;
    fs::create_directories(p);
    return p;
  }

  fs::path WriteConfig(const std::string& text) {
    const fs::path p = dir_ / "config.ini";
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

const std::string kData = RANKAGG_DATA;
const std::string kFixture = kData + "/fixtures/mini_letor.txt";

TEST_F(Cli, SynthGaussRecovery) {
  const fs::path out = Out("gauss");
  const Outcome r = Exec("synth --config " + kData + "/configs/gauss-recovery.ini --output " +
                     out.string());
  ASSERT_EQ(r.code, 0) << r.output;
  bool recovered = false;
  for (const auto& row : Rows(out / "synth_summary.csv")) {
    if (row.at(1) == "mr" && row.at(2) == "1") recovered = true;
  }
  EXPECT_TRUE(recovered);
  EXPECT_TRUE(fs::exists(out / "synth_trace.csv"));
  EXPECT_TRUE(fs::exists(out / "synth_ndcg.csv"));
  EXPECT_EQ(Slurp(out / "synth_summary.csv").rfind("# rankagg synth_summary v1\n", 0), 0u);
}

TEST_F(Cli, SynthSeedFlagIsDeterministic) {
  const fs::path cfg = WriteConfig("family = gaussian\nn = 60\nd = 5\nouter_max_iter = 5\n");
  const fs::path a = Out("a"), b = Out("b");
  ASSERT_EQ(Exec("synth --config " + cfg.string() + " --seed 7 --output " + a.string()).code, 0);
  ASSERT_EQ(Exec("synth --config " + cfg.string() + " --seed 7 --output " + b.string()).code, 0);
  for (const char* f : {"synth_trace.csv", "synth_ndcg.csv", "synth_summary.csv"}) {
    EXPECT_EQ(Slurp(a / f), Slurp(b / f)) << f;
    EXPECT_FALSE(Slurp(a / f).empty());
  }
  EXPECT_EQ(Rows(a / "synth_summary.csv").at(0).at(0), "7");
}

TEST_F(Cli, SynthMissingFamily) {
  const fs::path cfg = WriteConfig("n = 50\n");
  const Outcome r = Exec("synth --config " + cfg.string() + " --output " + Out("x").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("'family'"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find(cfg.string()), std::string::npos) << r.output;
}

TEST_F(Cli, SynthUnknownKey) {
  const fs::path cfg = WriteConfig("family = gaussian\nbogus = 1\n");
  const Outcome r = Exec("synth --config " + cfg.string() + " --output " + Out("x").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("bogus"), std::string::npos) << r.output;
}

TEST_F(Cli, AggregateFixtureShape) {
  const fs::path out = Out("agg");
  const Outcome r = Exec("aggregate " + kFixture + " --methods borda,combmnz,mr --output " +
                     out.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const auto rows = Rows(out / "aggregate_ndcg.csv");
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) EXPECT_EQ(row.size(), 11u);  // method + 10 K columns
  EXPECT_EQ(rows[0][0], "borda");
  EXPECT_EQ(rows[2][0], "mr");
}

TEST_F(Cli, AggregateUnknownMethod) {
  const Outcome r = Exec("aggregate " + kFixture + " --methods foo --output " + Out("x").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("combmnz"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("foo"), std::string::npos) << r.output;
}

TEST_F(Cli, AggregateMissingFile) {
  const Outcome r = Exec("aggregate " + (dir_ / "none.txt").string() + " --output " +
                     Out("x").string());
  EXPECT_NE(r.code, 0);
}

TEST_F(Cli, AugmentWithGradesHelpsMr) {
  const fs::path plain = Out("plain"), aug = Out("aug");
  ASSERT_EQ(Exec("aggregate " + kFixture + " --methods mr --output " + plain.string()).code, 0);
  const Outcome r = Exec("aggregate " + kFixture + " --methods mr --augment " + kFixture +
                     " --output " + aug.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const double before = std::stod(Rows(plain / "aggregate_ndcg.csv").at(0).at(1));
  const double after = std::stod(Rows(aug / "aggregate_ndcg.csv").at(0).at(1));
  EXPECT_GE(after, before);
}

TEST_F(Cli, AggregateJobsDoNotChangeOutput) {
  const fs::path a = Out("a"), b = Out("b");
  ASSERT_EQ(Exec("aggregate " + kFixture + " --jobs 1 --output " + a.string()).code, 0);
  ASSERT_EQ(Exec("aggregate " + kFixture + " --jobs 3 --output " + b.string()).code, 0);
  EXPECT_EQ(Slurp(a / "aggregate_ndcg.csv"), Slurp(b / "aggregate_ndcg.csv"));
  EXPECT_EQ(Slurp(a / "aggregate_queries.csv"), Slurp(b / "aggregate_queries.csv"));
}

TEST_F(Cli, Selftest) {
  const Outcome ok = Exec("selftest");
  EXPECT_EQ(ok.code, 0) << ok.output;
  const Outcome mutant = Exec("selftest --mutant-pooling");
  EXPECT_EQ(mutant.code, 1) << mutant.output;
  const Outcome json = Exec("selftest --json");
  EXPECT_EQ(json.code, 0);
  EXPECT_EQ(json.output.find('{'), 0u) << json.output;
  EXPECT_NE(json.output.find("\"passed\""), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(Exec("").code, 2);
  EXPECT_EQ(Exec("frobnicate").code, 2);
  EXPECT_EQ(Exec("synth").code, 2);
}

}  // namespace
