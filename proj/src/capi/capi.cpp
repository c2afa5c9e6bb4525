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

#include "rankagg/rankagg.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <spdlog/spdlog.h>

#include "rankagg/aggregate.hpp"
#include "rankagg/baselines.hpp"
#include "rankagg/data.hpp"
#include "rankagg/error.hpp"
#include "rankagg/metrics.hpp"
#include "selftest.hpp"

struct rankagg_config {
  rankagg::AggregationConfig cfg;
};

struct rankagg_synth_spec {
  rankagg::SyntheticSpec spec;
};

struct rankagg_dataset {
  std::vector<rankagg::QueryGroup> groups;
  std::vector<std::optional<rankagg::ScoreVector>> truth;
};

struct rankagg_result {
  rankagg::AggregationResult res;
};

namespace {

using namespace rankagg;

thread_local std::string g_last_error;

class UnknownKey : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

rankagg_status StatusOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return RANKAGG_E_INVALID_ARGUMENT;
    case ErrorKind::kDomain:
      return RANKAGG_E_DOMAIN;
    case ErrorKind::kDimension:
      return RANKAGG_E_DIMENSION;
    case ErrorKind::kDivergence:
      return RANKAGG_E_DIVERGENCE;
    case ErrorKind::kDegenerate:
      return RANKAGG_E_DEGENERATE;
    case ErrorKind::kParse:
      return RANKAGG_E_PARSE;
    case ErrorKind::kUndefinedMetric:
      return RANKAGG_E_UNDEFINED_METRIC;
    case ErrorKind::kNonConvergence:
      return RANKAGG_E_NONCONVERGENCE;
    case ErrorKind::kIo:
      return RANKAGG_E_IO;
  }
  return RANKAGG_E_INTERNAL;
}

template <typename F>
rankagg_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return RANKAGG_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return StatusOf(e.kind());
  } catch (const UnknownKey& e) {
    g_last_error = e.what();
    return RANKAGG_E_UNKNOWN_KEY;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RANKAGG_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RANKAGG_E_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) Fail(ErrorKind::kInvalidArgument, what);
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value,
                           std::string_view expected) {
  Fail(ErrorKind::kInvalidArgument, "key '" + std::string(key) + "': cannot use '" +
                                        std::string(value) + "', expected " +
                                        std::string(expected));
}

double ToDouble(std::string_view key, std::string_view text) {
  text = Trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v)) {
    BadValue(key, text, "a number");
  }
  return v;
}

long long ToInt(std::string_view key, std::string_view text, long long min) {
  text = Trim(text);
  long long v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || v < min) {
    BadValue(key, text, "an integer >= " + std::to_string(min));
  }
  return v;
}

DivergenceSpec ToFamily(std::string_view key, std::string_view text) {
  const auto f = ParseFamily(Trim(text));
  if (!f) BadValue(key, text, "gaussian, kl or poisson");
  return DivergenceSpec::For(*f);
}

Regularization ToRegularization(std::string_view key, std::string_view text) {
  text = Trim(text);
  const auto colon = text.find(':');
  const auto kind = ParseRegularizationKind(Trim(text.substr(0, colon)));
  if (!kind) BadValue(key, text, "none, ridge:<s> or lasso:<s>");
  if (*kind == Regularization::Kind::kNone) return Regularization::None();
  if (colon == std::string_view::npos) BadValue(key, text, "a strength after ':'");
  const double s = ToDouble(key, text.substr(colon + 1));
  if (s < 0.0) BadValue(key, text, "a nonnegative strength");
  return {*kind, s};
}

StartPolicy ToStart(std::string_view key, std::string_view text) {
  text = Trim(text);
  if (text == "warm") return StartPolicy::kWarm;
  if (text == "cold") return StartPolicy::kCold;
  if (text == "best") return StartPolicy::kBest;
  BadValue(key, text, "warm, cold or best");
}

void SetConfig(AggregationConfig& cfg, std::string_view key, std::string_view value) {
  auto positive = [&] {
    const double v = ToDouble(key, value);
    if (!(v > 0.0)) BadValue(key, value, "a positive number");
    return v;
  };
  auto count = [&](long long min) { return static_cast<int>(ToInt(key, value, min)); };
  if (key == "family") {
    cfg.phi_r = cfg.phi_z = ToFamily(key, value);
  } else if (key == "phi_r") {
    cfg.phi_r = ToFamily(key, value);
  } else if (key == "phi_z") {
    cfg.phi_z = ToFamily(key, value);
  } else if (key == "lambda") {
    cfg.lambda = positive();
  } else if (key == "epsilon_margin") {
    cfg.epsilon_margin = positive();
  } else if (key == "outer_tol") {
    cfg.outer_tol = positive();
  } else if (key == "positive_floor") {
    cfg.positive_floor = positive();
  } else if (key == "outer_max_iter") {
    cfg.outer_max_iter = count(1);
  } else if (key == "stable_orders") {
    cfg.stable_orders = count(1);
  } else if (key == "covariate_restarts") {
    cfg.covariate_restarts = count(0);
  } else if (key == "inner_max_iter") {
    cfg.inner.max_iter = count(1);
  } else if (key == "inner_tol") {
    cfg.inner.tol = positive();
  } else if (key == "glm_tol") {
    cfg.inner.glm.tol = positive();
  } else if (key == "init_method") {
    const auto m = ParseBaseline(Trim(value));
    if (!m) BadValue(key, value, "a baseline name");
    cfg.init_method = *m;
  } else if (key == "reg_beta") {
    cfg.reg_beta = ToRegularization(key, value);
  } else if (key == "reg_omega") {
    cfg.reg_omega = ToRegularization(key, value);
  } else if (key == "letor_start") {
    cfg.letor_start = ToStart(key, value);
  } else if (key == "rank_start") {
    cfg.rank_start = ToStart(key, value);
  } else if (key == "list_scale") {
    const auto v = Trim(value);
    if (v == "scores") {
      cfg.list_scale = ListScale::kScores;
    } else if (v == "ranks") {
      cfg.list_scale = ListScale::kRanks;
    } else {
      BadValue(key, value, "scores or ranks");
    }
  } else {
    throw UnknownKey("unknown aggregation key '" + std::string(key) + "'");
  }
}

std::vector<CorruptionOp> ToCorruption(std::string_view key, std::string_view text) {
  std::vector<CorruptionOp> ops;
  text = Trim(text);
  if (text.empty() || text == "none") return ops;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = Trim(text.substr(0, comma));
    const auto colon = item.find(':');
    const auto kind = ParseCorruptionKind(Trim(item.substr(0, colon)));
    if (!kind || colon == std::string_view::npos) {
      BadValue(key, item, "kind:magnitude with kind in translation, additive, "
                          "multiplicative, pure_noise");
    }
    ops.push_back({*kind, ToDouble(key, item.substr(colon + 1))});
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
  }
  return ops;
}

void SetSynth(SyntheticSpec& spec, std::string_view key, std::string_view value) {
  if (key == "family") {
    spec.family = ToFamily(key, value);
  } else if (key == "n") {
    spec.n = static_cast<std::size_t>(ToInt(key, value, 2));
  } else if (key == "d") {
    spec.d = static_cast<std::size_t>(ToInt(key, value, 1));
  } else if (key == "n_spurious") {
    spec.n_spurious = static_cast<std::size_t>(ToInt(key, value, 0));
  } else if (key == "seed") {
    spec.seed = static_cast<std::uint64_t>(ToInt(key, value, 0));
  } else if (key == "corruption") {
    spec.corruption = ToCorruption(key, value);
  } else {
    throw UnknownKey("unknown synthetic key '" + std::string(key) + "'");
  }
}

const QueryGroup& GroupAt(const rankagg_dataset* ds, size_t q) {
  Require(ds != nullptr, "dataset is null");
  if (q >= ds->groups.size()) {
    Fail(ErrorKind::kInvalidArgument, "query index " + std::to_string(q) +
                                          " out of range (" +
                                          std::to_string(ds->groups.size()) +
                                          " queries)");
  }
  return ds->groups[q];
}

void CopyOut(const Eigen::VectorXd& v, double* out, size_t len) {
  Require(out != nullptr, "output buffer is null");
  if (len != static_cast<size_t>(v.size())) {
    Fail(ErrorKind::kDimension, "output buffer holds " + std::to_string(len) +
                                    " values, need " + std::to_string(v.size()));
  }
  std::copy(v.data(), v.data() + v.size(), out);
}

ScoreVector ViewIn(const double* p, size_t n) {
  Require(p != nullptr || n == 0, "input buffer is null");
  return Eigen::Map<const Eigen::VectorXd>(p, static_cast<Eigen::Index>(n));
}

constexpr const char* kMethodNames =
    "mr,borda,combsum,combmnz,combanz,combmin,combmax,mc1,mc2,mc3,mc4";

bool SetLevel(std::string_view name) {
  static const std::pair<std::string_view, spdlog::level::level_enum> kLevels[] = {
      {"trace", spdlog::level::trace}, {"debug", spdlog::level::debug},
      {"info", spdlog::level::info},   {"warn", spdlog::level::warn},
      {"warning", spdlog::level::warn}, {"error", spdlog::level::err},
      {"off", spdlog::level::off}};
  for (const auto& [n, level] : kLevels) {
    if (n == name) {
      spdlog::set_level(level);
      return true;
    }
  }
  return false;
}

[[maybe_unused]] const bool kLogInit = [] {
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("RANKAGG_LOG")) SetLevel(env);
  return true;
}();

}  // namespace

extern "C" {

const char* rankagg_last_error(void) { return g_last_error.c_str(); }

const char* rankagg_status_name(rankagg_status status) {
  switch (status) {
    case RANKAGG_OK:
      return "ok";
    case RANKAGG_E_INVALID_ARGUMENT:
      return "invalid_argument";
    case RANKAGG_E_DOMAIN:
      return "domain";
    case RANKAGG_E_DIMENSION:
      return "dimension";
    case RANKAGG_E_DIVERGENCE:
      return "divergence";
    case RANKAGG_E_DEGENERATE:
      return "degenerate";
    case RANKAGG_E_PARSE:
      return "parse";
    case RANKAGG_E_UNDEFINED_METRIC:
      return "undefined_metric";
    case RANKAGG_E_NONCONVERGENCE:
      return "nonconvergence";
    case RANKAGG_E_IO:
      return "io";
    case RANKAGG_E_UNKNOWN_KEY:
      return "unknown_key";
    case RANKAGG_E_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* rankagg_version(void) { return "0.1.0"; }

rankagg_status rankagg_set_log_level(const char* level) {
  return Guard([&] {
    Require(level != nullptr && SetLevel(level),
            "log level must be trace, debug, info, warn, error or off");
  });
}

rankagg_status rankagg_config_create(rankagg_config** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    *out = new rankagg_config();
  });
}

void rankagg_config_destroy(rankagg_config* config) { delete config; }

rankagg_status rankagg_config_set(rankagg_config* config, const char* key,
                                  const char* value) {
  return Guard([&] {
    Require(config && key && value, "null argument");
    AggregationConfig next = config->cfg;
    SetConfig(next, Trim(key), value);
    config->cfg = std::move(next);
  });
}

rankagg_status rankagg_synth_spec_create(rankagg_synth_spec** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    *out = new rankagg_synth_spec();
  });
}

void rankagg_synth_spec_destroy(rankagg_synth_spec* spec) { delete spec; }

rankagg_status rankagg_synth_spec_set(rankagg_synth_spec* spec, const char* key,
                                      const char* value) {
  return Guard([&] {
    Require(spec && key && value, "null argument");
    SetSynth(spec->spec, Trim(key), value);
  });
}

rankagg_status rankagg_synth_generate(const rankagg_synth_spec* spec,
                                      rankagg_dataset** out) {
  return Guard([&] {
    Require(spec && out, "null argument");
    SyntheticInstance inst = GenerateSynthetic(spec->spec);
    auto ds = std::make_unique<rankagg_dataset>();
    ds->groups.push_back(std::move(inst.group));
    ds->truth.emplace_back(std::move(inst.true_scores));
    *out = ds.release();
  });
}

rankagg_status rankagg_dataset_load_letor(const char* path, const char* column_map,
                                          rankagg_dataset** out) {
  return Guard([&] {
    Require(path && column_map && out, "null argument");
    LetorOptions opts;
    opts.columns = ColumnMap::Parse(column_map);
    auto ds = std::make_unique<rankagg_dataset>();
    ds->groups = ParseLetorFile(path, opts);
    ds->truth.resize(ds->groups.size());
    *out = ds.release();
  });
}

void rankagg_dataset_destroy(rankagg_dataset* dataset) { delete dataset; }

size_t rankagg_dataset_query_count(const rankagg_dataset* dataset) {
  return dataset ? dataset->groups.size() : 0;
}

rankagg_status rankagg_dataset_query_shape(const rankagg_dataset* dataset,
                                           size_t query, size_t* items,
                                           size_t* features, size_t* lists) {
  return Guard([&] {
    const QueryGroup& g = GroupAt(dataset, query);
    if (items) *items = g.size();
    if (features) *features = static_cast<size_t>(g.x.cols());
    if (lists) *lists = static_cast<size_t>(g.r.cols());
  });
}

const char* rankagg_dataset_query_id(const rankagg_dataset* dataset, size_t query) {
  if (!dataset || query >= dataset->groups.size()) return nullptr;
  return dataset->groups[query].query_id.c_str();
}

rankagg_status rankagg_dataset_relevance(const rankagg_dataset* dataset,
                                         size_t query, int* out, size_t len) {
  return Guard([&] {
    const QueryGroup& g = GroupAt(dataset, query);
    Require(g.relevance.has_value(), "query has no relevance grades");
    Require(out != nullptr, "output buffer is null");
    if (len != g.relevance->size()) {
      Fail(ErrorKind::kDimension, "relevance buffer has the wrong length");
    }
    std::copy(g.relevance->begin(), g.relevance->end(), out);
  });
}

rankagg_status rankagg_dataset_true_scores(const rankagg_dataset* dataset,
                                           size_t query, double* out, size_t len) {
  return Guard([&] {
    GroupAt(dataset, query);
    Require(dataset->truth[query].has_value(), "query has no true scores");
    CopyOut(*dataset->truth[query], out, len);
  });
}

rankagg_status rankagg_dataset_augment(rankagg_dataset* dataset, size_t query,
                                       const double* scores, size_t len) {
  return Guard([&] {
    const QueryGroup& g = GroupAt(dataset, query);
    if (len != g.size()) {
      Fail(ErrorKind::kDimension, "augment: need " + std::to_string(g.size()) +
                                      " scores, got " + std::to_string(len));
    }
    dataset->groups[query] = AugmentWithQualityList(g, ViewIn(scores, len));
  });
}

const char* rankagg_method_names(void) { return kMethodNames; }

int rankagg_method_valid(const char* name) {
  if (name == nullptr) return 0;
  return std::string_view(name) == "mr" || ParseBaseline(name).has_value();
}

rankagg_status rankagg_score(const rankagg_config* config,
                             const rankagg_dataset* dataset, size_t query,
                             const char* method, double* out, size_t len) {
  return Guard([&] {
    const QueryGroup& g = GroupAt(dataset, query);
    Require(method != nullptr, "method is null");
    if (std::string_view(method) == "mr") {
      Require(config != nullptr, "method mr needs a config");
      const auto res = MrRankAgg(g.r, g.x, config->cfg);
      CopyOut(res.consensus_order.PositionScores(), out, len);
      return;
    }
    const auto m = ParseBaseline(method);
    if (!m) {
      Fail(ErrorKind::kInvalidArgument, "unknown method '" + std::string(method) +
                                            "'; valid methods: " + kMethodNames);
    }
    CopyOut(RunBaseline(g.r, *m), out, len);
  });
}

rankagg_status rankagg_aggregate(const rankagg_config* config,
                                 const rankagg_dataset* dataset, size_t query,
                                 rankagg_result** out) {
  return Guard([&] {
    Require(config && out, "null argument");
    const QueryGroup& g = GroupAt(dataset, query);
    auto res = std::make_unique<rankagg_result>();
    res->res = MrRankAgg(g.r, g.x, config->cfg);
    *out = res.release();
  });
}

void rankagg_result_destroy(rankagg_result* result) { delete result; }

rankagg_status rankagg_result_summary(const rankagg_result* result,
                                      rankagg_summary* out) {
  return Guard([&] {
    Require(result && out, "null argument");
    const auto& r = result->res;
    out->items = r.consensus_order.size();
    out->lists = static_cast<size_t>(r.preprocessed_lists.cols());
    out->steps = r.per_step_orders.size();
    out->total_iterations = r.total_iterations;
    out->restarts = r.restarts;
    out->converged = r.converged ? 1 : 0;
    out->coupled_cost = r.coupled_cost_trace.empty() ? 0.0 : r.coupled_cost_trace.back();
  });
}

rankagg_status rankagg_result_consensus(const rankagg_result* result, double* out,
                                        size_t len) {
  return Guard([&] {
    Require(result != nullptr, "result is null");
    CopyOut(result->res.consensus_order.PositionScores(), out, len);
  });
}

rankagg_status rankagg_result_step_consensus(const rankagg_result* result,
                                             size_t step, double* out, size_t len) {
  return Guard([&] {
    Require(result != nullptr, "result is null");
    Require(step < result->res.per_step_orders.size(), "step out of range");
    CopyOut(result->res.per_step_orders[step].PositionScores(), out, len);
  });
}

rankagg_status rankagg_result_step_cost(const rankagg_result* result, size_t step,
                                        double* coupled, double* r_cost,
                                        double* z_cost, int* margin) {
  return Guard([&] {
    Require(result != nullptr, "result is null");
    const auto& r = result->res;
    Require(step < r.coupled_cost_trace.size(), "step out of range");
    if (coupled) *coupled = r.coupled_cost_trace[step];
    if (r_cost) *r_cost = r.r_cost_trace[step];
    if (z_cost) *z_cost = r.z_cost_trace[step];
    if (margin) {
      *margin = std::find(r.margin_iterations.begin(), r.margin_iterations.end(),
                          static_cast<int>(step)) != r.margin_iterations.end();
    }
  });
}

rankagg_status rankagg_result_expert_weights(const rankagg_result* result,
                                             double* out, size_t len) {
  return Guard([&] {
    Require(result != nullptr, "result is null");
    CopyOut(ExpertWeights(result->res), out, len);
  });
}

const char* rankagg_result_diagnostic(const rankagg_result* result) {
  return result ? result->res.diagnostic.c_str() : "";
}

rankagg_status rankagg_kendall_tau(const double* a, const double* b, size_t n,
                                   double* out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    *out = KendallTau(ViewIn(a, n), ViewIn(b, n));
  });
}

rankagg_status rankagg_spearman_rho(const double* a, const double* b, size_t n,
                                    double* out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    *out = SpearmanRho(ViewIn(a, n), ViewIn(b, n));
  });
}

rankagg_status rankagg_ndcg(const double* predicted, const int* relevance,
                            size_t n, size_t k, double* out) {
  return Guard([&] {
    Require(out != nullptr && (relevance != nullptr || n == 0), "null argument");
    *out = NdcgAtK(ViewIn(predicted, n), std::span<const int>(relevance, n), k);
  });
}

rankagg_status rankagg_selftest(uint64_t seed, unsigned flags, int* passed,
                                char** report) {
  return Guard([&] {
    Require(passed != nullptr, "passed is null");
    selftest::Options opts;
    opts.seed = seed;
    opts.mutant_pooling = (flags & RANKAGG_SELFTEST_MUTANT_POOLING) != 0;
    const auto rep = selftest::Run(opts);
    *passed = rep.passed ? 1 : 0;
    if (report) {
      const std::string text = rep.json.dump(2);
      char* buf = static_cast<char*>(std::malloc(text.size() + 1));
      if (!buf) throw std::bad_alloc();
      std::memcpy(buf, text.c_str(), text.size() + 1);
      *report = buf;
    }
  });
}

void rankagg_string_free(char* s) { std::free(s); }

}  // extern "C"
