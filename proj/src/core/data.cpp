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

#include "rankagg/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "rankagg/error.hpp"

namespace rankagg {
namespace {

double PopulationStd(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() /
                   static_cast<double>(v.size()));
}

std::vector<int> Range(int lo, int hi) {
  std::vector<int> out(static_cast<std::size_t>(hi - lo + 1));
  std::iota(out.begin(), out.end(), lo);
  return out;
}

std::vector<int> Complement(int total, const std::vector<int>& taken) {
  const std::set<int> used(taken.begin(), taken.end());
  std::vector<int> out;
  for (int i = 1; i <= total; ++i) {
    if (!used.count(i)) out.push_back(i);
  }
  return out;
}

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int ParseIntOrThrow(std::string_view s, std::string_view what) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    Fail(ErrorKind::kParse, std::string(what) + ": bad integer '" +
                                std::string(s) + "'");
  }
  return v;
}

// "1-3,7" -> {1,2,3,7}
std::vector<int> ParseIndexList(std::string_view s) {
  std::vector<int> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const std::string_view item = Trim(s.substr(0, comma));
    s = comma == std::string_view::npos ? std::string_view{} : s.substr(comma + 1);
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(ParseIntOrThrow(item, "column map"));
    } else {
      const int lo = ParseIntOrThrow(Trim(item.substr(0, dash)), "column map");
      const int hi = ParseIntOrThrow(Trim(item.substr(dash + 1)), "column map");
      if (hi < lo) Fail(ErrorKind::kParse, "column map: empty range");
      const auto r = Range(lo, hi);
      out.insert(out.end(), r.begin(), r.end());
    }
  }
  return out;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

[[noreturn]] void LineError(std::size_t line, const std::string& msg) {
  Fail(ErrorKind::kParse, "letor line " + std::to_string(line) + ": " + msg);
}

}  // namespace

std::string_view CorruptionKindName(CorruptionOp::Kind kind) {
  switch (kind) {
    case CorruptionOp::Kind::kTranslation:
      return "translation";
    case CorruptionOp::Kind::kAdditiveNoise:
      return "additive";
    case CorruptionOp::Kind::kMultiplicativeNoise:
      return "multiplicative";
    case CorruptionOp::Kind::kPureNoise:
      return "pure_noise";
  }
  return "translation";
}

std::optional<CorruptionOp::Kind> ParseCorruptionKind(std::string_view name) {
  for (auto k : {CorruptionOp::Kind::kTranslation,
                 CorruptionOp::Kind::kAdditiveNoise,
                 CorruptionOp::Kind::kMultiplicativeNoise,
                 CorruptionOp::Kind::kPureNoise}) {
    if (CorruptionKindName(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<CorruptionOp> SyntheticSpec::DefaultCorruption() {
  using K = CorruptionOp::Kind;
  return {{K::kTranslation, 1.0},          {K::kTranslation, 1.0},
          {K::kAdditiveNoise, 0.25},       {K::kAdditiveNoise, 0.25},
          {K::kMultiplicativeNoise, 0.25}, {K::kMultiplicativeNoise, 0.25}};
}

void SyntheticSpec::Validate() const {
  family.Validate();
  if (n < 2) Fail(ErrorKind::kInvalidArgument, "synthetic: n must be >= 2");
  if (d < 1) Fail(ErrorKind::kInvalidArgument, "synthetic: d must be >= 1");
  if (p_total() < 1) {
    Fail(ErrorKind::kInvalidArgument, "synthetic: at least one list needed");
  }
  if (family.family == Family::kKL) {
    Fail(ErrorKind::kInvalidArgument,
         "synthetic: generator supports squared_euclidean and generalized_i");
  }
  for (const auto& op : corruption) {
    if (!(op.magnitude >= 0.0) || !std::isfinite(op.magnitude)) {
      Fail(ErrorKind::kInvalidArgument,
           "synthetic: corruption magnitude must be >= 0");
    }
  }
}

void QueryGroup::Validate() const {
  if (x.rows() != r.rows()) {
    Fail(ErrorKind::kDimension, "query " + query_id + ": X and R row counts differ");
  }
  if (relevance && relevance->size() != static_cast<std::size_t>(x.rows())) {
    Fail(ErrorKind::kDimension, "query " + query_id + ": relevance length differs");
  }
}

std::vector<int> TopGrades(const ScoreVector& true_scores, int levels) {
  const auto n = static_cast<std::size_t>(true_scores.size());
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return true_scores[static_cast<Eigen::Index>(a)] >
           true_scores[static_cast<Eigen::Index>(b)];
  });
  std::vector<int> grades(n, 0);
  for (std::size_t k = 0; k < n && static_cast<int>(k) < levels; ++k) {
    grades[idx[k]] = levels - static_cast<int>(k);
  }
  return grades;
}

SyntheticInstance GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto d = static_cast<Eigen::Index>(spec.d);

  SyntheticInstance out;
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = normal(rng);
  }
  out.true_omega.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) out.true_omega[j] = normal(rng);
  const Eigen::VectorXd theta = x * out.true_omega;
  out.true_scores = InvGradPhi(spec.family, theta);
  const double rho_sd = PopulationStd(out.true_scores);
  const double theta_sd = PopulationStd(theta);

  auto noise_list = [&]() {
    Eigen::VectorXd t(n);
    for (Eigen::Index i = 0; i < n; ++i) t[i] = theta_sd * normal(rng);
    return InvGradPhi(spec.family, t);
  };

  Eigen::MatrixXd r(n, static_cast<Eigen::Index>(spec.p_total()));
  Eigen::Index col = 0;
  for (const auto& op : spec.corruption) {
    Eigen::VectorXd c = out.true_scores;
    switch (op.kind) {
      case CorruptionOp::Kind::kTranslation:
        c.array() += op.magnitude * rho_sd * (0.5 + unit(rng));
        break;
      case CorruptionOp::Kind::kAdditiveNoise:
        for (Eigen::Index i = 0; i < n; ++i) {
          c[i] += op.magnitude * rho_sd * normal(rng);
        }
        break;
      case CorruptionOp::Kind::kMultiplicativeNoise:
        for (Eigen::Index i = 0; i < n; ++i) {
          c[i] *= 1.0 - op.magnitude + 2.0 * op.magnitude * unit(rng);
        }
        break;
      case CorruptionOp::Kind::kPureNoise:
        c = noise_list();
        break;
    }
    r.col(col++) = c;
  }
  for (std::size_t k = 0; k < spec.n_spurious; ++k) r.col(col++) = noise_list();

  out.group.query_id = "synthetic-" + std::to_string(spec.seed);
  out.group.x = std::move(x);
  out.group.r = std::move(r);
  out.group.relevance = TopGrades(out.true_scores);
  return out;
}

QueryGroup AugmentWithQualityList(QueryGroup group,
                                  const ScoreVector& oracle_scores) {
  if (oracle_scores.size() != group.r.rows()) {
    Fail(ErrorKind::kDimension,
         "augment: oracle scores have length " +
             std::to_string(oracle_scores.size()) + ", expected " +
             std::to_string(group.r.rows()));
  }
  if (oracle_scores.size() == 0 ||
      oracle_scores.maxCoeff() == oracle_scores.minCoeff()) {
    Fail(ErrorKind::kDegenerate, "augment: oracle scores are constant");
  }
  Eigen::MatrixXd r(group.r.rows(), group.r.cols() + 1);
  r.leftCols(group.r.cols()) = group.r;
  r.col(group.r.cols()) = oracle_scores;
  group.r = std::move(r);
  return group;
}

ColumnMap ColumnMap::Mq() {
  std::vector<int> r = Range(11, 15);
  const auto tail = Range(21, 40);
  r.insert(r.end(), tail.begin(), tail.end());
  return {Complement(46, r), r};
}

ColumnMap ColumnMap::Ohsumed() {
  std::vector<int> r;
  for (int start : {11, 26, 41}) {
    const auto part = Range(start, start + 4);
    r.insert(r.end(), part.begin(), part.end());
  }
  return {Complement(45, r), r};
}

ColumnMap ColumnMap::Parse(std::string_view text) {
  text = Trim(text);
  if (text == "mq") return Mq();
  if (text == "ohsumed") return Ohsumed();
  ColumnMap map;
  bool have_x = false, have_r = false;
  while (!text.empty()) {
    const auto semi = text.find(';');
    const std::string_view part = Trim(text.substr(0, semi));
    text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) {
      Fail(ErrorKind::kParse, "column map: expected x=... or r=..., got '" +
                                  std::string(part) + "'");
    }
    const std::string_view key = Trim(part.substr(0, eq));
    if (key == "x") {
      map.x_columns = ParseIndexList(part.substr(eq + 1));
      have_x = true;
    } else if (key == "r") {
      map.r_columns = ParseIndexList(part.substr(eq + 1));
      have_r = true;
    } else {
      Fail(ErrorKind::kParse, "column map: unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_x || !have_r) {
    Fail(ErrorKind::kParse,
         "column map: need 'mq', 'ohsumed' or both x=... and r=...");
  }
  map.Validate();
  return map;
}

void ColumnMap::Validate() const {
  if (x_columns.empty() || r_columns.empty()) {
    Fail(ErrorKind::kInvalidArgument, "column map: X and R sets must be nonempty");
  }
  std::set<int> seen;
  for (const auto* cols : {&x_columns, &r_columns}) {
    std::set<int> local;
    for (int c : *cols) {
      if (c < 1) Fail(ErrorKind::kInvalidArgument, "column map: indices are 1-based");
      if (!local.insert(c).second) {
        Fail(ErrorKind::kInvalidArgument,
             "column map: column " + std::to_string(c) + " listed twice");
      }
    }
    for (int c : local) {
      if (!seen.insert(c).second) {
        Fail(ErrorKind::kInvalidArgument,
             "column map: column " + std::to_string(c) + " is in both X and R");
      }
    }
  }
}

std::vector<QueryGroup> ParseLetor(std::istream& in, const LetorOptions& opts) {
  opts.columns.Validate();
  std::unordered_map<int, std::pair<char, std::size_t>> slot;  // index -> (X|R, col)
  for (std::size_t j = 0; j < opts.columns.x_columns.size(); ++j) {
    slot[opts.columns.x_columns[j]] = {'x', j};
  }
  for (std::size_t j = 0; j < opts.columns.r_columns.size(); ++j) {
    slot[opts.columns.r_columns[j]] = {'r', j};
  }
  const std::size_t dx = opts.columns.x_columns.size();
  const std::size_t dr = opts.columns.r_columns.size();

  struct Pending {
    std::string qid;
    std::vector<std::vector<double>> x, r;
    std::vector<int> grades;
    std::vector<std::string> comments;
  };
  std::vector<Pending> groups;
  std::map<std::string, std::size_t> index_of;
  std::string last_qid;

  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    std::string comment;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      comment = std::string(Trim(line.substr(hash + 1)));
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    std::istringstream tokens{std::string(line)};
    std::string tok;
    tokens >> tok;
    int grade = 0;
    {
      const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), grade);
      if (ec != std::errc() || p != tok.data() + tok.size() || grade < 0) {
        LineError(lineno, "bad relevance grade '" + tok + "'");
      }
    }
    if (!(tokens >> tok) || tok.rfind("qid:", 0) != 0 || tok.size() == 4) {
      LineError(lineno, "expected qid:<id> after the grade");
    }
    const std::string qid = tok.substr(4);

    std::vector<double> xv(dx, std::nan("")), rv(dr, std::nan(""));
    std::set<int> indices;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0) {
        LineError(lineno, "expected <index>:<value>, got '" + tok + "'");
      }
      int idx = 0;
      const auto [pi, eci] = std::from_chars(tok.data(), tok.data() + colon, idx);
      if (eci != std::errc() || pi != tok.data() + colon || idx < 1) {
        LineError(lineno, "bad feature index in '" + tok + "'");
      }
      double val = 0.0;
      const char* vb = tok.data() + colon + 1;
      const char* ve = tok.data() + tok.size();
      const auto [pv, ecv] = std::from_chars(vb, ve, val);
      if (ecv != std::errc() || pv != ve || !std::isfinite(val)) {
        LineError(lineno, "bad feature value in '" + tok + "'");
      }
      if (!indices.insert(idx).second) {
        LineError(lineno, "feature " + std::to_string(idx) + " repeated");
      }
      if (const auto it = slot.find(idx); it != slot.end()) {
        (it->second.first == 'x' ? xv : rv)[it->second.second] = val;
      }
    }
    for (auto* vec : {&xv, &rv}) {
      for (std::size_t j = 0; j < vec->size(); ++j) {
        if (!std::isnan((*vec)[j])) continue;
        if (!opts.pad_missing) {
          const int col = vec == &xv ? opts.columns.x_columns[j]
                                     : opts.columns.r_columns[j];
          LineError(lineno, "mapped feature " + std::to_string(col) + " missing");
        }
        (*vec)[j] = opts.pad_value;
      }
    }

    auto it = index_of.find(qid);
    if (it == index_of.end()) {
      it = index_of.emplace(qid, groups.size()).first;
      groups.push_back({qid, {}, {}, {}, {}});
    } else if (opts.strict_grouping && qid != last_qid) {
      LineError(lineno, "qid " + qid + " reappears after another query");
    }
    last_qid = qid;
    Pending& g = groups[it->second];
    g.x.push_back(std::move(xv));
    g.r.push_back(std::move(rv));
    g.grades.push_back(grade);
    g.comments.push_back(std::move(comment));
  }

  std::vector<QueryGroup> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    QueryGroup q;
    q.query_id = g.qid;
    const auto n = static_cast<Eigen::Index>(g.grades.size());
    q.x.resize(n, static_cast<Eigen::Index>(dx));
    q.r.resize(n, static_cast<Eigen::Index>(dr));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < dx; ++j) {
        q.x(i, static_cast<Eigen::Index>(j)) = g.x[static_cast<std::size_t>(i)][j];
      }
      for (std::size_t j = 0; j < dr; ++j) {
        q.r(i, static_cast<Eigen::Index>(j)) = g.r[static_cast<std::size_t>(i)][j];
      }
    }
    q.relevance = std::move(g.grades);
    q.comments = std::move(g.comments);
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<QueryGroup> ParseLetorFile(const std::string& path,
                                       const LetorOptions& opts) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path);
  try {
    return ParseLetor(in, opts);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

void WriteLetor(std::ostream& out, const std::vector<QueryGroup>& groups,
                const ColumnMap& columns) {
  columns.Validate();
  std::vector<std::pair<int, std::pair<char, std::size_t>>> order;
  for (std::size_t j = 0; j < columns.x_columns.size(); ++j) {
    order.push_back({columns.x_columns[j], {'x', j}});
  }
  for (std::size_t j = 0; j < columns.r_columns.size(); ++j) {
    order.push_back({columns.r_columns[j], {'r', j}});
  }
  std::sort(order.begin(), order.end());
  for (const auto& g : groups) {
    g.Validate();
    if (static_cast<std::size_t>(g.x.cols()) != columns.x_columns.size() ||
        static_cast<std::size_t>(g.r.cols()) != columns.r_columns.size()) {
      Fail(ErrorKind::kDimension,
           "write_letor: query " + g.query_id + " does not match the column map");
    }
    for (Eigen::Index i = 0; i < g.x.rows(); ++i) {
      out << (g.relevance ? (*g.relevance)[static_cast<std::size_t>(i)] : 0)
          << " qid:" << g.query_id;
      for (const auto& [idx, where] : order) {
        const auto j = static_cast<Eigen::Index>(where.second);
        out << ' ' << idx << ':'
            << FormatDouble(where.first == 'x' ? g.x(i, j) : g.r(i, j));
      }
      const auto si = static_cast<std::size_t>(i);
      if (si < g.comments.size() && !g.comments[si].empty()) {
        out << " #" << g.comments[si];
      }
      out << '\n';
    }
  }
}

}  // namespace rankagg
