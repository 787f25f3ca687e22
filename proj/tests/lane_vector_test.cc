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

#include <array>

#include <gtest/gtest.h>

#include "dwconv/lane_vector.h"

namespace dwconv {
namespace {

using Lanes = std::array<float, kVectorLanes>;

const LaneVector kA = LaneVector::of(1, 2, 3, 4);
const LaneVector kB = LaneVector::of(5, 6, 7, 8);

TEST(LaneVector, LoadStoreBroadcastZero) {
  const float src[4] = {1.5f, -2.0f, 3.25f, 0.0f};
  EXPECT_EQ(LaneVector::load(src).to_array(), (Lanes{1.5f, -2.0f, 3.25f, 0.0f}));
  EXPECT_EQ(LaneVector::broadcast(7).to_array(), (Lanes{7, 7, 7, 7}));
  EXPECT_EQ(LaneVector::zero().to_array(), (Lanes{0, 0, 0, 0}));
  EXPECT_EQ(kA.lane(2), 3.0f);
}

TEST(LaneVector, ExtConcatenatesAndShifts) {
  EXPECT_EQ(LaneVector::ext<0>(kA, kB).to_array(), (Lanes{1, 2, 3, 4}));
  EXPECT_EQ(LaneVector::ext<1>(kA, kB).to_array(), (Lanes{2, 3, 4, 5}));
  EXPECT_EQ(LaneVector::ext<2>(kA, kB).to_array(), (Lanes{3, 4, 5, 6}));
  EXPECT_EQ(LaneVector::ext<3>(kA, kB).to_array(), (Lanes{4, 5, 6, 7}));
}

TEST(LaneVector, DeinterleaveAndZipAreInverse) {
  const auto ev = LaneVector::even(kA, kB);
  const auto od = LaneVector::odd(kA, kB);
  EXPECT_EQ(ev.to_array(), (Lanes{1, 3, 5, 7}));
  EXPECT_EQ(od.to_array(), (Lanes{2, 4, 6, 8}));
  EXPECT_EQ(LaneVector::zip_lo(ev, od).to_array(), kA.to_array());
  EXPECT_EQ(LaneVector::zip_hi(ev, od).to_array(), kB.to_array());
}

TEST(LaneVector, SplatFmaMask) {
  EXPECT_EQ(kA.splat<0>().to_array(), (Lanes{1, 1, 1, 1}));
  EXPECT_EQ(kA.splat<3>().to_array(), (Lanes{4, 4, 4, 4}));
  EXPECT_EQ(LaneVector::fma(kA, kB, LaneVector::broadcast(2)).to_array(),
            (Lanes{11, 14, 17, 20}));
  EXPECT_EQ(kA.keep_first<3>().to_array(), (Lanes{1, 2, 3, 0}));
  EXPECT_EQ(kA.keep_first<0>().to_array(), (Lanes{0, 0, 0, 0}));
  EXPECT_EQ(kA.keep_first<4>().to_array(), kA.to_array());
}

TEST(LaneVector, ReportsBackend) {
  const std::string name = LaneVector::backend();
  EXPECT_TRUE(name == "sse" || name == "neon" || name == "scalar") << name;
}

}  // namespace
}  // namespace dwconv
