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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rankagg/bregman.hpp"
#include "rankagg/ordering.hpp"

namespace rankagg {

struct CorruptionOp {
  enum class Kind { kTranslation, kAdditiveNoise, kMultiplicativeNoise, kPureNoise };

  Kind kind = Kind::kTranslation;
  // Translation: shift by magnitude * std(rho) * U(0.5, 1.5).
  // AdditiveNoise: add N(0, (magnitude * std(rho))^2) per item.
  // MultiplicativeNoise: multiply by U(1 - magnitude, 1 + magnitude) per item.
  // PureNoise: ignore rho; Mean(N(0, std(theta)^2)) per item.
  double magnitude = 0.0;
};

std::string_view CorruptionKindName(CorruptionOp::Kind kind);
std::optional<CorruptionOp::Kind> ParseCorruptionKind(std::string_view name);

struct SyntheticSpec {
  std::size_t n = 200;
  std::size_t d = 20;
  DivergenceSpec family = DivergenceSpec::SquaredEuclidean();
  // One informative list per op.
  std::vector<CorruptionOp> corruption = DefaultCorruption();
  std::size_t n_spurious = 4;
  std::uint64_t seed = 0;

  std::size_t p_total() const { return corruption.size() + n_spurious; }
  void Validate() const;

  // 2 translations, 2 additive (0.25), 2 multiplicative (0.25).
  static std::vector<CorruptionOp> DefaultCorruption();
};

struct QueryGroup {
  std::string query_id;
  Eigen::MatrixXd x;  // features, n x d
  Eigen::MatrixXd r;  // rank lists, n x p
  std::optional<std::vector<int>> relevance;
  // Trailing "#..." text of each line, without the '#'.
  std::vector<std::string> comments;

  std::size_t size() const { return static_cast<std::size_t>(x.rows()); }
  void Validate() const;
};

struct SyntheticInstance {
  QueryGroup group;
  ScoreVector true_scores;  // rho*
  Eigen::VectorXd true_omega;
};

// Deterministic in spec.seed. The group's relevance holds grades derived from
// rho*: the best item gets 10, the next 9, ..., the tenth 1, the rest 0.
SyntheticInstance GenerateSynthetic(const SyntheticSpec& spec);

// Graded relevance from true scores as described above.
std::vector<int> TopGrades(const ScoreVector& true_scores, int levels = 10);

// Appends oracle_scores as one more rank-list column. Rejects a constant
// vector.
QueryGroup AugmentWithQualityList(QueryGroup group,
                                  const ScoreVector& oracle_scores);

// Split of 1-based LETOR feature indices into features and rank lists.
struct ColumnMap {
  std::vector<int> x_columns;
  std::vector<int> r_columns;

  // LETOR 4.0 MQ2007/MQ2008: 46 columns; ranker outputs 11-15 and 21-40 are
  // rank lists, the other 21 are features.
  static ColumnMap Mq();
  // LETOR 3.0 OHSUMED: 45 columns; 11-15, 26-30 and 41-45 are rank lists,
  // the other 30 are features.
  static ColumnMap Ohsumed();
  // "mq", "ohsumed", or explicit "x=1-3,7;r=4-6".
  static ColumnMap Parse(std::string_view text);

  // Throws kInvalidArgument on empty, non-positive or overlapping sets.
  void Validate() const;
};

struct LetorOptions {
  ColumnMap columns;
  // Reject a qid that reappears after another qid started.
  bool strict_grouping = false;
  // Fill missing mapped features with pad_value instead of rejecting.
  bool pad_missing = false;
  double pad_value = 0.0;
};

// Groups lines by qid in order of first appearance. Errors name the line.
std::vector<QueryGroup> ParseLetor(std::istream& in, const LetorOptions& opts);
std::vector<QueryGroup> ParseLetorFile(const std::string& path,
                                       const LetorOptions& opts);

// Writes groups in the same format, features at their mapped indices.
// Groups without relevance are written with grade 0.
void WriteLetor(std::ostream& out, const std::vector<QueryGroup>& groups,
                const ColumnMap& columns);

}  // namespace rankagg
