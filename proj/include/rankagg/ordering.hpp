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

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rankagg {

// Per-item real scores, higher = more relevant.
using ScoreVector = Eigen::VectorXd;

// A weak ordering of item indices as a sequence of tie-blocks. Earlier blocks
// hold lower scores. Blocks partition {0..n-1}; a total ordering has only
// singleton blocks.
class Ordering {
 public:
  using Block = std::vector<std::size_t>;

  Ordering() = default;

  // Validates that `blocks` partition {0..n-1} where n is the total size.
  explicit Ordering(std::vector<Block> blocks);

  // Groups exactly-equal scores into tie-blocks, ascending by score. Indices
  // inside each block are kept ascending.
  static Ordering FromScores(const ScoreVector& scores);

  // The total order placing `chain[0]` lowest.
  static Ordering FromChain(std::span<const std::size_t> chain);

  // All n items in a single tie-block.
  static Ordering SingleBlock(std::size_t n);

  std::size_t size() const noexcept { return size_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  bool is_total() const noexcept { return blocks_.size() == size_; }

  // Index of the block containing `item`, for every item.
  std::vector<std::size_t> BlockIndex() const;

  // Items from lowest to highest, with each tie-block sorted by ascending
  // `keys` and then by ascending index.
  std::vector<std::size_t> RefinedChain(const ScoreVector& keys) const;

  // The total ordering obtained by refining every tie-block with `keys`.
  Ordering RefineBy(const ScoreVector& keys) const;

  // Position scores 0..n-1 (lowest item gets 0); tied items share the mean
  // position of their block. Usable as input to the rank metrics.
  ScoreVector PositionScores() const;

  // True when `values` is nondecreasing across blocks, constant within blocks.
  bool IsConsistentWith(const ScoreVector& values) const;

  // True when `values` is nondecreasing along the block sequence. Values
  // inside a block may differ.
  bool IsNondecreasingAcrossBlocks(const ScoreVector& values) const;

  // Applies a relabeling: item i becomes perm[i].
  Ordering Permuted(std::span<const std::size_t> perm) const;

  friend bool operator==(const Ordering&, const Ordering&) = default;

 private:
  std::vector<Block> blocks_;
  std::size_t size_ = 0;
};

}  // namespace rankagg
