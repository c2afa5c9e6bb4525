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

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace rankagg {
namespace {

using Blocks = std::vector<Ordering::Block>;

TEST(Ordering, FromScoresGroupsTiesAscending) {
  const Ordering o = Ordering::FromScores(Vec({3, 1, 3, 2}));
  EXPECT_EQ(o.blocks(), (Blocks{{1}, {3}, {0, 2}}));
  EXPECT_EQ(o.size(), 4u);
  EXPECT_FALSE(o.is_total());
}

TEST(Ordering, RejectsNonPartitions) {
  EXPECT_RANKAGG_ERROR(Ordering(Blocks{{0}, {0}}), ErrorKind::kInvalidArgument);
  EXPECT_RANKAGG_ERROR(Ordering(Blocks{{0}, {}}), ErrorKind::kInvalidArgument);
  EXPECT_RANKAGG_ERROR(Ordering(Blocks{{0}, {2}}), ErrorKind::kInvalidArgument);
}

TEST(Ordering, RefineByKeysThenIndex) {
  const Ordering o(Blocks{{0, 1, 2}, {3}});
  EXPECT_EQ(o.RefineBy(Vec({0.3, 0.1, 0.2, 0.0})).blocks(),
            (Blocks{{1}, {2}, {0}, {3}}));
  EXPECT_EQ(o.RefineBy(Vec({0.5, 0.5, 0.1, 0.0})).blocks(),
            (Blocks{{2}, {0}, {1}, {3}}));
  EXPECT_RANKAGG_ERROR(o.RefineBy(Vec({1, 2})), ErrorKind::kDimension);
}

TEST(Ordering, PositionScoresShareBlockMean) {
  const Ordering o(Blocks{{2}, {0, 3}, {1}});
  EXPECT_EQ(StdVec(o.PositionScores()), (std::vector<double>{1.5, 3, 0, 1.5}));
}

TEST(Ordering, ConsistencyChecks) {
  const Ordering o(Blocks{{1}, {0, 2}});
  EXPECT_TRUE(o.IsConsistentWith(Vec({2, 1, 2})));
  EXPECT_FALSE(o.IsConsistentWith(Vec({2, 1, 3})));
  EXPECT_TRUE(o.IsNondecreasingAcrossBlocks(Vec({2, 1, 3})));
  EXPECT_FALSE(o.IsNondecreasingAcrossBlocks(Vec({0, 1, 3})));
}

TEST(Ordering, PermutedRelabelsItems) {
  const Ordering o(Blocks{{0}, {1, 2}});
  const std::vector<std::size_t> perm{2, 0, 1};
  EXPECT_EQ(o.Permuted(perm).blocks(), (Blocks{{2}, {0, 1}}));
}

TEST(Ordering, SingleBlockAndChain) {
  EXPECT_EQ(Ordering::SingleBlock(3).block_count(), 1u);
  EXPECT_EQ(Ordering::SingleBlock(0).size(), 0u);
  const std::vector<std::size_t> chain{2, 0, 1};
  const Ordering c = Ordering::FromChain(chain);
  EXPECT_TRUE(c.is_total());
  EXPECT_EQ(c.BlockIndex(), (std::vector<std::size_t>{1, 2, 0}));
}

}  // namespace
}  // namespace rankagg
