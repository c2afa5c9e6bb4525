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

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "rankagg/rankagg.h"

namespace rankagg_cli {
namespace {

constexpr int kMaxK = 10;

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

void Check(rankagg_status status, const std::string& context) {
  if (status == RANKAGG_OK) return;
  throw CliError(kExitFailure, context + ": " + rankagg_last_error());
}

struct Deleter {
  void operator()(rankagg_config* p) const { rankagg_config_destroy(p); }
  void operator()(rankagg_synth_spec* p) const { rankagg_synth_spec_destroy(p); }
  void operator()(rankagg_dataset* p) const { rankagg_dataset_destroy(p); }
  void operator()(rankagg_result* p) const { rankagg_result_destroy(p); }
};
using ConfigPtr = std::unique_ptr<rankagg_config, Deleter>;
using SpecPtr = std::unique_ptr<rankagg_synth_spec, Deleter>;
using DatasetPtr = std::unique_ptr<rankagg_dataset, Deleter>;
using ResultPtr = std::unique_ptr<rankagg_result, Deleter>;

std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, end) : "nan";
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Flat INI as ordered key/value pairs.
std::vector<std::pair<std::string, std::string>> ReadIni(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw CliError(kExitUsage, "config " + path + ": " + e.message() + " (line " +
                                   std::to_string(e.line()) + ")");
  }
  std::vector<std::pair<std::string, std::string>> kv;
  for (const auto& [key, node] : tree) {
    if (!node.empty()) {
      throw CliError(kExitUsage, "config " + path + ": section [" + key +
                                     "] not supported; keys are flat");
    }
    kv.emplace_back(key, node.data());
  }
  return kv;
}

void CheckMethods(const std::vector<std::string>& methods) {
  if (methods.empty()) throw CliError(kExitUsage, "no methods given");
  for (const auto& m : methods) {
    if (!rankagg_method_valid(m.c_str())) {
      throw CliError(kExitUsage, "unknown method '" + m +
                                     "'; valid methods: " + rankagg_method_names());
    }
  }
}

void SetKey(rankagg_config* cfg, const std::string& path, const std::string& key,
            const std::string& value) {
  if (rankagg_config_set(cfg, key.c_str(), value.c_str()) != RANKAGG_OK) {
    throw CliError(kExitUsage, "config " + path + ": " + rankagg_last_error());
  }
}

// Runs body(i) for i in [0, count) on up to `jobs` threads. The first error
// in index order is rethrown.
template <typename F>
void ParallelFor(std::size_t count, int jobs, F body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::ofstream OpenCsv(const std::string& dir, const std::string& name,
                      const std::string& schema) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(kExitFailure, "cannot write " + path.string());
  out << "# rankagg " << schema << " v1\n";
  return out;
}

std::string NdcgHeader() {
  std::string h;
  for (int k = 1; k <= kMaxK; ++k) h += ",ndcg@" + std::to_string(k);
  return h;
}

// NDCG@1..kMaxK; k is clamped to the number of items.
std::vector<double> NdcgRow(const std::vector<double>& scores, const std::vector<int>& rel) {
  std::vector<double> row;
  for (int k = 1; k <= kMaxK; ++k) {
    double v = 0.0;
    const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), scores.size());
    Check(rankagg_ndcg(scores.data(), rel.data(), scores.size(), kk, &v), "ndcg");
    row.push_back(v);
  }
  return row;
}

double Metric(rankagg_status (*fn)(const double*, const double*, size_t, double*),
              const std::vector<double>& a, const std::vector<double>& b) {
  double v = std::nan("");
  if (fn(a.data(), b.data(), a.size(), &v) != RANKAGG_OK) return std::nan("");
  return v;
}

// ---------------------------------------------------------------- synth

const std::set<std::string> kSynthKeys = {"n", "d", "n_spurious", "seed", "corruption"};

struct SeedOutput {
  std::string trace;
  std::string ndcg;
  std::string summary;
  std::vector<std::string> table;
};

}  // namespace

int RunSynth(const SynthArgs& args) {
  try {
    const auto kv = ReadIni(args.config);
    std::map<std::string, std::string> synth_keys;
    std::vector<std::string> methods = SplitList(rankagg_method_names());
    long long seeds = 1;
    ConfigPtr base_cfg;
    {
      rankagg_config* c = nullptr;
      Check(rankagg_config_create(&c), "config");
      base_cfg.reset(c);
    }
    bool has_family = false;
    for (const auto& [key, value] : kv) {
      if (key == "family") {
        has_family = true;
        synth_keys[key] = value;
        SetKey(base_cfg.get(), args.config, key, value);
      } else if (kSynthKeys.count(key)) {
        synth_keys[key] = value;
      } else if (key == "seeds") {
        try {
          seeds = std::stoll(value);
        } catch (const std::exception&) {
          seeds = 0;
        }
        if (seeds < 1) {
          throw CliError(kExitUsage, "config " + args.config +
                                         ": key 'seeds' must be a positive integer");
        }
      } else if (key == "methods") {
        methods = SplitList(value);
      } else {
        SetKey(base_cfg.get(), args.config, key, value);
      }
    }
    if (!has_family) {
      throw CliError(kExitUsage,
                     "config " + args.config + ": missing required key 'family'");
    }
    CheckMethods(methods);
    if (args.seed >= 0) synth_keys["seed"] = std::to_string(args.seed);
    long long first_seed = 0;
    if (synth_keys.count("seed")) {
      try {
        first_seed = std::stoll(synth_keys["seed"]);
      } catch (const std::exception&) {
        first_seed = -1;
      }
      if (first_seed < 0) {
        throw CliError(kExitUsage,
                       "config " + args.config + ": key 'seed' must be a nonnegative integer");
      }
    }
    // Validate the synthetic keys once before fanning out.
    {
      rankagg_synth_spec* sp = nullptr;
      Check(rankagg_synth_spec_create(&sp), "synthetic spec");
      SpecPtr spec(sp);
      for (const auto& [key, value] : synth_keys) {
        if (rankagg_synth_spec_set(spec.get(), key.c_str(), value.c_str()) != RANKAGG_OK) {
          throw CliError(kExitUsage, "config " + args.config + ": " + rankagg_last_error());
        }
      }
    }

    std::vector<SeedOutput> outputs(static_cast<std::size_t>(seeds));
    ParallelFor(outputs.size(), args.jobs, [&](std::size_t i) {
      const long long seed = first_seed + static_cast<long long>(i);
      const std::string tag = "seed " + std::to_string(seed);
      rankagg_synth_spec* sp = nullptr;
      Check(rankagg_synth_spec_create(&sp), tag);
      SpecPtr spec(sp);
      for (const auto& [key, value] : synth_keys) {
        Check(rankagg_synth_spec_set(spec.get(), key.c_str(), value.c_str()), tag);
      }
      Check(rankagg_synth_spec_set(spec.get(), "seed", std::to_string(seed).c_str()), tag);
      rankagg_dataset* dp = nullptr;
      Check(rankagg_synth_generate(spec.get(), &dp), tag);
      DatasetPtr ds(dp);

      std::size_t n = 0;
      Check(rankagg_dataset_query_shape(ds.get(), 0, &n, nullptr, nullptr), tag);
      std::vector<double> truth(n);
      std::vector<int> rel(n);
      Check(rankagg_dataset_true_scores(ds.get(), 0, truth.data(), n), tag);
      Check(rankagg_dataset_relevance(ds.get(), 0, rel.data(), n), tag);

      rankagg_result* rp = nullptr;
      Check(rankagg_aggregate(base_cfg.get(), ds.get(), 0, &rp), tag + ", mr");
      ResultPtr res(rp);
      rankagg_summary sum{};
      Check(rankagg_result_summary(res.get(), &sum), tag);

      SeedOutput& o = outputs[i];
      std::vector<double> scores(n);
      for (std::size_t step = 0; step < sum.steps; ++step) {
        Check(rankagg_result_step_consensus(res.get(), step, scores.data(), n), tag);
        double coupled = 0, rc = 0, zc = 0;
        int margin = 0;
        Check(rankagg_result_step_cost(res.get(), step, &coupled, &rc, &zc, &margin), tag);
        o.trace += std::to_string(seed) + "," + std::to_string(step + 1) + "," +
                   Num(Metric(rankagg_kendall_tau, scores, truth)) + "," +
                   Num(Metric(rankagg_spearman_rho, scores, truth)) + "," + Num(coupled) +
                   "," + Num(rc) + "," + Num(zc) + "," + std::to_string(margin) + "\n";
      }

      for (const auto& m : methods) {
        std::string iterations, converged;
        if (m == "mr") {
          Check(rankagg_result_consensus(res.get(), scores.data(), n), tag);
          iterations = std::to_string(sum.total_iterations);
          converged = std::to_string(sum.converged);
        } else {
          Check(rankagg_score(nullptr, ds.get(), 0, m.c_str(), scores.data(), n),
                tag + ", " + m);
        }
        const double tau = Metric(rankagg_kendall_tau, scores, truth);
        const double rho = Metric(rankagg_spearman_rho, scores, truth);
        const bool recovered = tau >= 1.0 - 1e-9 && rho >= 1.0 - 1e-9;
        o.summary += std::to_string(seed) + "," + m + "," + Num(tau) + "," + Num(rho) +
                     "," + (recovered ? "1" : "0") + "," + iterations + "," + converged +
                     "\n";
        o.ndcg += std::to_string(seed) + "," + m;
        for (double v : NdcgRow(scores, rel)) o.ndcg += "," + Num(v);
        o.ndcg += "\n";
        char line[160];
        std::snprintf(line, sizeof line, "%6lld  %-8s  %10.6f  %10.6f  %s", seed,
                      m.c_str(), tau, rho, recovered ? "yes" : "no");
        o.table.emplace_back(line);
      }
    });

    auto trace = OpenCsv(args.output, "synth_trace.csv", "synth_trace");
    trace << "seed,iteration,kendall_tau,spearman_rho,coupled_cost,r_cost,z_cost,margin\n";
    auto ndcg = OpenCsv(args.output, "synth_ndcg.csv", "synth_ndcg");
    ndcg << "seed,method" << NdcgHeader() << "\n";
    auto summary = OpenCsv(args.output, "synth_summary.csv", "synth_summary");
    summary << "seed,method,kendall_tau,spearman_rho,recovered,iterations,converged\n";
    std::cout << "  seed  method    kendall_tau  spearman_rho  recovered\n";
    for (const auto& o : outputs) {
      trace << o.trace;
      ndcg << o.ndcg;
      summary << o.summary;
      for (const auto& l : o.table) std::cout << l << "\n";
    }
    return kExitOk;
  } catch (const CliError& e) {
    std::cerr << "rankagg synth: " << e.what() << "\n";
    return e.code();
  }
}

// ------------------------------------------------------------ aggregate

namespace {

// Extra list values per query. A LETOR file contributes its relevance
// grades, matched by qid and position; any other file is one number per
// line in dataset order.
std::vector<std::vector<double>> ReadAugment(const std::string& path,
                                             const rankagg_dataset* ds) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitFailure, "cannot read " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  const std::size_t queries = rankagg_dataset_query_count(ds);
  std::vector<std::vector<double>> out(queries);
  const bool letor = !lines.empty() && lines.front().find("qid:") != std::string::npos;
  auto number = [&](const std::string& tok, std::size_t lineno) {
    double v = 0;
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || end != tok.data() + tok.size()) {
      throw CliError(kExitFailure, path + " line " + std::to_string(lineno) +
                                       ": not a number: '" + tok + "'");
    }
    return v;
  };
  if (letor) {
    std::map<std::string, std::vector<double>> by_qid;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::istringstream ls(lines[i]);
      std::string grade, qid;
      ls >> grade >> qid;
      if (qid.rfind("qid:", 0) != 0) {
        throw CliError(kExitFailure, path + " line " + std::to_string(i + 1) + ": missing qid");
      }
      by_qid[qid.substr(4)].push_back(number(grade, i + 1));
    }
    for (std::size_t q = 0; q < queries; ++q) {
      const auto it = by_qid.find(rankagg_dataset_query_id(ds, q));
      if (it == by_qid.end()) {
        throw CliError(kExitFailure, path + ": no lines for qid " +
                                         rankagg_dataset_query_id(ds, q));
      }
      out[q] = it->second;
    }
  } else {
    std::size_t at = 0;
    for (std::size_t q = 0; q < queries; ++q) {
      std::size_t n = 0;
      Check(rankagg_dataset_query_shape(ds, q, &n, nullptr, nullptr), "dataset");
      for (std::size_t i = 0; i < n; ++i, ++at) {
        if (at >= lines.size()) throw CliError(kExitFailure, path + ": too few values");
        std::string tok = lines[at];
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t\r") + 1);
        out[q].push_back(number(tok, at + 1));
      }
    }
    if (at != lines.size()) throw CliError(kExitFailure, path + ": too many values");
  }
  return out;
}

}  // namespace

int RunAggregate(const AggregateArgs& args) {
  try {
    CheckMethods(args.methods);
    rankagg_config* c = nullptr;
    Check(rankagg_config_create(&c), "config");
    ConfigPtr cfg(c);
    if (!args.config.empty()) {
      for (const auto& [key, value] : ReadIni(args.config)) {
        SetKey(cfg.get(), args.config, key, value);
      }
    }
    rankagg_dataset* dp = nullptr;
    if (rankagg_dataset_load_letor(args.dataset.c_str(), args.columns.c_str(), &dp) !=
        RANKAGG_OK) {
      const int code = std::string(rankagg_last_error()).find("column") != std::string::npos &&
                               std::string(rankagg_last_error()).find("line") == std::string::npos
                           ? kExitUsage
                           : kExitFailure;
      throw CliError(code, args.dataset + ": " + rankagg_last_error());
    }
    DatasetPtr ds(dp);
    const std::size_t queries = rankagg_dataset_query_count(ds.get());
    if (!args.augment.empty()) {
      const auto extra = ReadAugment(args.augment, ds.get());
      for (std::size_t q = 0; q < queries; ++q) {
        Check(rankagg_dataset_augment(ds.get(), q, extra[q].data(), extra[q].size()),
              std::string("augment, qid ") + rankagg_dataset_query_id(ds.get(), q));
      }
    }

    // rows[q][m]: NDCG@1..kMaxK, empty when the query has no relevant item.
    std::vector<std::vector<std::vector<double>>> rows(queries);
    ParallelFor(queries, args.jobs, [&](std::size_t q) {
      const std::string tag = std::string("qid ") + rankagg_dataset_query_id(ds.get(), q);
      std::size_t n = 0;
      Check(rankagg_dataset_query_shape(ds.get(), q, &n, nullptr, nullptr), tag);
      std::vector<int> rel(n);
      Check(rankagg_dataset_relevance(ds.get(), q, rel.data(), n), tag);
      rows[q].resize(args.methods.size());
      if (std::all_of(rel.begin(), rel.end(), [](int r) { return r == 0; })) return;
      std::vector<double> scores(n);
      for (std::size_t m = 0; m < args.methods.size(); ++m) {
        Check(rankagg_score(cfg.get(), ds.get(), q, args.methods[m].c_str(), scores.data(), n),
              tag + ", " + args.methods[m]);
        rows[q][m] = NdcgRow(scores, rel);
      }
    });

    auto per_query = OpenCsv(args.output, "aggregate_queries.csv", "aggregate_queries");
    per_query << "qid,method" << NdcgHeader() << "\n";
    std::vector<std::vector<double>> mean(args.methods.size(), std::vector<double>(kMaxK, 0.0));
    std::size_t used = 0;
    for (std::size_t q = 0; q < queries; ++q) {
      if (rows[q].empty() || rows[q][0].empty()) continue;
      ++used;
      for (std::size_t m = 0; m < args.methods.size(); ++m) {
        per_query << rankagg_dataset_query_id(ds.get(), q) << "," << args.methods[m];
        for (int k = 0; k < kMaxK; ++k) {
          per_query << "," << Num(rows[q][m][static_cast<std::size_t>(k)]);
          mean[m][static_cast<std::size_t>(k)] += rows[q][m][static_cast<std::size_t>(k)];
        }
        per_query << "\n";
      }
    }
    if (used == 0) throw CliError(kExitFailure, "no query has a relevant item");
    auto out = OpenCsv(args.output, "aggregate_ndcg.csv", "aggregate_ndcg");
    out << "method" << NdcgHeader() << "\n";
    std::cout << "method     ndcg@1    ndcg@5    ndcg@10   (" << used << " queries)\n";
    for (std::size_t m = 0; m < args.methods.size(); ++m) {
      out << args.methods[m];
      for (double& v : mean[m]) {
        v /= static_cast<double>(used);
        out << "," << Num(v);
      }
      out << "\n";
      char line[128];
      std::snprintf(line, sizeof line, "%-9s  %8.4f  %8.4f  %8.4f", args.methods[m].c_str(),
                    mean[m][0], mean[m][4], mean[m][9]);
      std::cout << line << "\n";
    }
    return kExitOk;
  } catch (const CliError& e) {
    std::cerr << "rankagg aggregate: " << e.what() << "\n";
    return e.code();
  }
}

// ------------------------------------------------------------- selftest

int RunSelftest(const SelftestArgs& args) {
  int passed = 0;
  char* report = nullptr;
  const unsigned flags = args.mutant_pooling ? RANKAGG_SELFTEST_MUTANT_POOLING : 0u;
  if (rankagg_selftest(args.seed, flags, &passed, &report) != RANKAGG_OK) {
    std::cerr << "rankagg selftest: " << rankagg_last_error() << "\n";
    return kExitFailure;
  }
  const std::string text = report;
  rankagg_string_free(report);
  const auto doc = nlohmann::json::parse(text);
  if (args.json) {
    std::cout << text << "\n";
  } else {
    for (const auto& c : doc["checks"]) {
      char line[160];
      std::snprintf(line, sizeof line, "%-28s %4d cases  max error %.3g  %s",
                    c["name"].get<std::string>().c_str(), c["cases"].get<int>(),
                    c["max_error"].get<double>(), c["passed"].get<bool>() ? "ok" : "FAIL");
      std::cout << line << "\n";
    }
    std::cout << (passed ? "selftest passed" : "selftest FAILED") << "\n";
  }
  if (!args.output.empty()) {
    try {
      auto csv = OpenCsv(args.output, "selftest.csv", "selftest");
      csv << "check,cases,failures,max_error,tolerance,passed\n";
      for (const auto& c : doc["checks"]) {
        csv << c["name"].get<std::string>() << "," << c["cases"].get<int>() << ","
            << c["failures"].get<int>() << "," << Num(c["max_error"].get<double>()) << ","
            << Num(c["tolerance"].get<double>()) << "," << (c["passed"].get<bool>() ? 1 : 0)
            << "\n";
      }
    } catch (const CliError& e) {
      std::cerr << "rankagg selftest: " << e.what() << "\n";
      return kExitFailure;
    }
  }
  return passed ? kExitOk : kExitFailure;
}

}  // namespace rankagg_cli
