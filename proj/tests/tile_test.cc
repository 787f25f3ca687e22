// Copyright 2026 The dwconv Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "dwconv/tile.h"
#include "testing/test_util.h"

namespace dwconv {
namespace {

TEST(TileConfig, ParseAndLegality) {
  EXPECT_EQ(parse_tile("4x4"), (TileConfig{4, 4}));
  EXPECT_EQ(parse_tile("6X8"), (TileConfig{6, 8}));
  EXPECT_THROW(parse_tile("4"), std::invalid_argument);
  EXPECT_THROW(parse_tile("0x4"), std::invalid_argument);
  EXPECT_THROW(parse_tile("4x4x"), std::invalid_argument);
  EXPECT_TRUE(tile_is_legal({4, 4}));
  EXPECT_TRUE(tile_is_legal({2, 8}));
  EXPECT_TRUE(tile_is_legal({6, 8}));
  EXPECT_FALSE(tile_is_legal({4, 6}));
  EXPECT_FALSE(tile_is_legal({8, 12}));  // 24 + 9 + 3 registers
}

TEST(SelectTile, Stride1LargeLayerHasNoEdgeWork) {
  const auto s = select_tile(ConvGeometry::make(1, 1, 112, 112, 1));
  ASSERT_EQ(s.bands.size(), 28u);
  for (const auto& band : s.bands) {
    EXPECT_EQ(band.rows, 4);
    ASSERT_EQ(band.spans.size(), 1u);
    EXPECT_EQ(band.spans[0].wr, 4);
    EXPECT_EQ(band.spans[0].count, 28);
    EXPECT_EQ(band.scalar_wo0, 112);
  }
}

TEST(SelectTile, Stride1SevenBySevenLayout) {
  const auto s = select_tile(ConvGeometry::make(1, 1, 7, 7, 1));
  ASSERT_EQ(s.bands.size(), 3u);
  // Rows 0-3: one 4x4 tile, columns 4-6 scalar.
  EXPECT_EQ(s.bands[0].rows, 4);
  ASSERT_EQ(s.bands[0].spans.size(), 1u);
  EXPECT_EQ(s.bands[0].spans[0].wr, 4);
  EXPECT_EQ(s.bands[0].scalar_wo0, 4);
  // Rows 4-5: 2-row tile narrowed to width 4 since W_o < 8.
  EXPECT_EQ(s.bands[1].ho0, 4);
  EXPECT_EQ(s.bands[1].rows, 2);
  ASSERT_EQ(s.bands[1].spans.size(), 1u);
  EXPECT_EQ(s.bands[1].spans[0].wr, 4);
  EXPECT_EQ(s.bands[1].scalar_wo0, 4);
  // Row 6 is scalar.
  EXPECT_EQ(s.bands[2].ho0, 6);
  EXPECT_TRUE(s.bands[2].spans.empty());
  EXPECT_TRUE(testing::partitions(s));
}

TEST(SelectTile, ShortHeightsPreferTwoByEight) {
  const auto s = select_tile(ConvGeometry::make(1, 1, 3, 20, 1));
  ASSERT_FALSE(s.bands.empty());
  EXPECT_EQ(s.bands[0].rows, 2);
  EXPECT_EQ(s.bands[0].spans[0].wr, 8);
  EXPECT_EQ(s.bands[0].spans[0].count, 2);
  EXPECT_EQ(s.bands[0].spans[1].wr, 4);
  EXPECT_TRUE(testing::partitions(s));
}

TEST(SelectTile, Stride2UsesOneByFour) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    ConvParams p;
    p.hi = std::uniform_int_distribution<int>(3, 60)(rng);
    p.wi = std::uniform_int_distribution<int>(3, 60)(rng);
    p.stride = 2;
    const auto s = select_tile(ConvGeometry(p));
    for (const auto& band : s.bands) {
      EXPECT_EQ(band.rows, 1);
      for (const auto& span : band.spans) EXPECT_EQ(span.wr, 4);
    }
  }
}

TEST(TileSchedule, PartitionsOutputOnRandomShapes) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> extent(1, 70);
  for (int trial = 0; trial < 500; ++trial) {
    const auto g = testing::random_direct_geometry(rng, 3, 70);
    EXPECT_TRUE(testing::partitions(select_tile(g))) << g.to_string();
    const int h = extent(rng);
    const int w = extent(rng);
    EXPECT_TRUE(testing::partitions(make_schedule(h, w, {6, 8}, 8)));
    EXPECT_TRUE(testing::partitions(make_schedule(h, w, {3, 16}, 4)));
  }
}

TEST(TileSchedule, CoverageCheckerDetectsOverlap) {
  auto s = make_schedule(8, 8, {4, 4}, 4);
  s.bands[0].scalar_wo0 = 4;  // columns 4-7 now owned twice
  EXPECT_FALSE(testing::partitions(s));
}

}  // namespace
}  // namespace dwconv
