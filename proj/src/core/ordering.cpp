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

#include "rankagg/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "rankagg/error.hpp"

namespace rankagg {

Ordering::Ordering(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  std::size_t n = 0;
  for (const auto& b : blocks_) {
    if (b.empty()) Fail(ErrorKind::kInvalidArgument, "ordering: empty block");
    n += b.size();
  }
  std::vector<char> seen(n, 0);
  for (const auto& b : blocks_) {
    for (std::size_t i : b) {
      if (i >= n || seen[i]) {
        Fail(ErrorKind::kInvalidArgument,
             "ordering: blocks do not partition {0.." + std::to_string(n) +
                 "}");
      }
      seen[i] = 1;
    }
  }
  size_ = n;
}

Ordering Ordering::FromScores(const ScoreVector& scores) {
  const auto n = static_cast<std::size_t>(scores.size());
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  std::vector<Block> blocks;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0 || scores[idx[k]] != scores[idx[k - 1]]) blocks.emplace_back();
    blocks.back().push_back(idx[k]);
  }
  return Ordering(std::move(blocks));
}

Ordering Ordering::FromChain(std::span<const std::size_t> chain) {
  std::vector<Block> blocks;
  blocks.reserve(chain.size());
  for (std::size_t i : chain) blocks.push_back({i});
  return Ordering(std::move(blocks));
}

Ordering Ordering::SingleBlock(std::size_t n) {
  if (n == 0) return Ordering();
  Block b(n);
  std::iota(b.begin(), b.end(), std::size_t{0});
  return Ordering({std::move(b)});
}

std::vector<std::size_t> Ordering::BlockIndex() const {
  std::vector<std::size_t> out(size_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    for (std::size_t i : blocks_[k]) out[i] = k;
  }
  return out;
}

std::vector<std::size_t> Ordering::RefinedChain(const ScoreVector& keys) const {
  if (static_cast<std::size_t>(keys.size()) != size_) {
    Fail(ErrorKind::kDimension, "ordering: key length " +
                                    std::to_string(keys.size()) +
                                    " != item count " + std::to_string(size_));
  }
  std::vector<std::size_t> chain;
  chain.reserve(size_);
  for (const auto& b : blocks_) {
    const auto first = chain.size();
    chain.insert(chain.end(), b.begin(), b.end());
    std::sort(chain.begin() + static_cast<std::ptrdiff_t>(first), chain.end(),
              [&](std::size_t x, std::size_t y) {
                if (keys[x] != keys[y]) return keys[x] < keys[y];
                return x < y;
              });
  }
  return chain;
}

Ordering Ordering::RefineBy(const ScoreVector& keys) const {
  const auto chain = RefinedChain(keys);
  return FromChain(chain);
}

ScoreVector Ordering::PositionScores() const {
  ScoreVector out(static_cast<Eigen::Index>(size_));
  double pos = 0.0;
  for (const auto& b : blocks_) {
    const double mid = pos + (static_cast<double>(b.size()) - 1.0) / 2.0;
    for (std::size_t i : b) out[static_cast<Eigen::Index>(i)] = mid;
    pos += static_cast<double>(b.size());
  }
  return out;
}

bool Ordering::IsConsistentWith(const ScoreVector& values) const {
  if (static_cast<std::size_t>(values.size()) != size_) return false;
  bool have_prev = false;
  double prev = 0.0;
  for (const auto& b : blocks_) {
    const double v = values[static_cast<Eigen::Index>(b.front())];
    for (std::size_t i : b) {
      if (values[static_cast<Eigen::Index>(i)] != v) return false;
    }
    if (have_prev && v < prev) return false;
    prev = v;
    have_prev = true;
  }
  return true;
}

bool Ordering::IsNondecreasingAcrossBlocks(const ScoreVector& values) const {
  if (static_cast<std::size_t>(values.size()) != size_) return false;
  bool have_prev = false;
  double prev_max = 0.0;
  for (const auto& b : blocks_) {
    double lo = values[static_cast<Eigen::Index>(b.front())];
    double hi = lo;
    for (std::size_t i : b) {
      lo = std::min(lo, values[static_cast<Eigen::Index>(i)]);
      hi = std::max(hi, values[static_cast<Eigen::Index>(i)]);
    }
    if (have_prev && lo < prev_max) return false;
    prev_max = hi;
    have_prev = true;
  }
  return true;
}

Ordering Ordering::Permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != size_) {
    Fail(ErrorKind::kDimension, "ordering: permutation length mismatch");
  }
  std::vector<Block> blocks = blocks_;
  for (auto& b : blocks) {
    for (auto& i : b) i = perm[i];
    std::sort(b.begin(), b.end());
  }
  return Ordering(std::move(blocks));
}

}  // namespace rankagg
