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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dwconv/reference.h"
#include "testing/test_util.h"

namespace dwconv {
namespace {

using reference::backward_gemm_baseline;
using reference::backward_naive;
using reference::forward_gemm_baseline;
using reference::forward_naive;
using reference::wgrad_gemm_baseline;
using reference::wgrad_naive;

std::vector<float> values(std::span<const float> s) { return {s.begin(), s.end()}; }

FilterSet ones_filter(int c = 1) {
  return FilterSet(c, 3, 3, std::vector<float>(9 * c, 1.0f));
}

FilterSet center_filter() {
  FilterSet f(1, 3, 3);
  f.at(0, 1, 1) = 1.0f;
  return f;
}

const ConvGeometry kSame3 = ConvGeometry::make(1, 1, 3, 3, 1);

TEST(ForwardNaive, HandComputedOnesFilter) {
  const TensorNCHW in(1, 1, 3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto out = forward_naive(in, ones_filter(), kSame3);
  EXPECT_EQ(values(out.data()),
            (std::vector<float>{12, 21, 16, 27, 45, 33, 24, 39, 28}));
}

TEST(ForwardNaive, IdentityAndZeroFilters) {
  std::mt19937 rng(1);
  const auto in = testing::random_tensor(1, 1, 3, 3, rng);
  EXPECT_EQ(values(forward_naive(in, center_filter(), kSame3).data()),
            values(in.data()));
  const auto zero = forward_naive(in, FilterSet(1, 3, 3), kSame3);
  for (float v : zero.data()) EXPECT_EQ(v, 0.0f);
}

TEST(BackwardNaive, DeltaScatterIsClipped) {
  TensorNCHW dout(1, 1, 3, 3);
  dout.at(0, 0, 0, 0) = 1.0f;
  EXPECT_EQ(values(backward_naive(dout, ones_filter(), kSame3).data()),
            (std::vector<float>{1, 1, 0, 1, 1, 0, 0, 0, 0}));
}

TEST(BackwardNaive, IdentityAndZero) {
  std::mt19937 rng(2);
  const auto dout = testing::random_tensor(1, 1, 3, 3, rng);
  EXPECT_EQ(values(backward_naive(dout, center_filter(), kSame3).data()),
            values(dout.data()));
  const auto zero = backward_naive(TensorNCHW(1, 1, 3, 3), ones_filter(), kSame3);
  for (float v : zero.data()) EXPECT_EQ(v, 0.0f);
}

TEST(WgradNaive, OnesCountValidTaps) {
  const TensorNCHW ones(1, 1, 3, 3, std::vector<float>(9, 1.0f));
  EXPECT_EQ(values(wgrad_naive(ones, ones, kSame3).data()),
            (std::vector<float>{4, 6, 4, 6, 9, 6, 4, 6, 4}));
}

TEST(WgradNaive, CenterDeltaSelectsInput) {
  std::mt19937 rng(3);
  const auto in = testing::random_tensor(1, 1, 3, 3, rng);
  TensorNCHW dout(1, 1, 3, 3);
  dout.at(0, 0, 1, 1) = 1.0f;
  EXPECT_EQ(values(wgrad_naive(in, dout, kSame3).data()), values(in.data()));
  const auto zero = wgrad_naive(in, TensorNCHW(1, 1, 3, 3), kSame3);
  for (float v : zero.data()) EXPECT_EQ(v, 0.0f);
}

TEST(Reference, AdjointIdentity) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = testing::random_generic_geometry(rng);
    const auto in = testing::random_input(g, rng);
    const auto f = testing::random_filters(g.c(), g.hf(), g.wf(), rng);
    const auto dout = testing::random_dout(g, rng);
    const double lhs = testing::dot(dout.data(), forward_naive(in, f, g).data());
    const double rhs = testing::dot(backward_naive(dout, f, g).data(), in.data());
    EXPECT_NEAR(lhs, rhs, 1e-6 * std::max(1.0, std::abs(lhs))) << g.to_string();
  }
}

double loss(const TensorNCHW& in, const FilterSet& f, const TensorNCHW& dout,
            const ConvGeometry& g) {
  return testing::forward_loss_double(in, f, dout, g);
}

TEST(Reference, WgradMatchesCentralDifferences) {
  std::mt19937 rng(5);
  const auto g = ConvGeometry::make(1, 2, 5, 5, 1);
  const auto in = testing::random_input(g, rng);
  const auto dout = testing::random_dout(g, rng);
  auto f = testing::random_filters(2, 3, 3, rng);
  const auto df = wgrad_naive(in, dout, g);
  const float step = 1e-3f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const float saved = f.data()[i];
    f.data()[i] = saved + step;
    const double up = loss(in, f, dout, g);
    f.data()[i] = saved - step;
    const double down = loss(in, f, dout, g);
    f.data()[i] = saved;
    const double h = (static_cast<double>(saved + step) - (saved - step));
    const double fd = (up - down) / h;
    EXPECT_NEAR(df.data()[i], fd, 1e-4 * std::max(1.0, std::abs(fd))) << i;
  }
}

TEST(Reference, BackwardMatchesCentralDifferences) {
  std::mt19937 rng(6);
  const auto g = ConvGeometry::make(1, 2, 5, 5, 2);
  auto in = testing::random_input(g, rng);
  const auto dout = testing::random_dout(g, rng);
  const auto f = testing::random_filters(2, 3, 3, rng);
  const auto din = backward_naive(dout, f, g);
  const float step = 1e-3f;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const float saved = in.data()[i];
    in.data()[i] = saved + step;
    const double up = loss(in, f, dout, g);
    in.data()[i] = saved - step;
    const double down = loss(in, f, dout, g);
    in.data()[i] = saved;
    const double fd = (up - down) / (static_cast<double>(saved + step) - (saved - step));
    EXPECT_NEAR(din.data()[i], fd, 1e-4 * std::max(1.0, std::abs(fd))) << i;
  }
}

TEST(Im2col, ColumnsHoldWindowTaps) {
  const TensorNCHW in(1, 1, 3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto cols = reference::im2col(in, kSame3);
  ASSERT_EQ(cols.mm(), 9);
  ASSERT_EQ(cols.nm(), 9);
  // Column of output (0,0): taps (-1..1, -1..1).
  const std::vector<float> first{0, 0, 0, 0, 1, 2, 0, 4, 5};
  for (int r = 0; r < 9; ++r) EXPECT_EQ(cols.at(0, r, 0), first[r]);
  // col2im of all-ones columns counts how often each input is touched.
  reference::Im2colMatrix ones(1, 9, 9);
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) ones.at(0, r, c) = 1.0f;
  EXPECT_EQ(values(reference::col2im(ones, kSame3).data()),
            (std::vector<float>{4, 6, 4, 6, 9, 6, 4, 6, 4}));
}

TEST(GemmBaselines, MatchNaiveOnRandomGeometries) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = testing::random_generic_geometry(rng);
    const auto in = testing::random_input(g, rng);
    const auto f = testing::random_filters(g.c(), g.hf(), g.wf(), rng);
    const auto dout = testing::random_dout(g, rng);
    EXPECT_LE(max_relative_error(forward_gemm_baseline(in, f, g).data(),
                                 forward_naive(in, f, g).data()),
              1e-6)
        << g.to_string();
    EXPECT_LE(max_relative_error(backward_gemm_baseline(dout, f, g).data(),
                                 backward_naive(dout, f, g).data()),
              1e-6)
        << g.to_string();
    EXPECT_LE(max_relative_error(wgrad_gemm_baseline(in, dout, g).data(),
                                 wgrad_naive(in, dout, g).data()),
              1e-6)
        << g.to_string();
  }
}

TEST(ForwardNaive, CountsEveryTapWithoutReuse) {
  std::mt19937 rng(8);
  const auto g = ConvGeometry::make(2, 3, 9, 7, 1, 0);
  MeasuredTraffic t;
  forward_naive(testing::random_input(g, rng), testing::random_filters(3, 3, 3, rng),
                g, &t);
  EXPECT_EQ(t.loads_i, int64_t{2} * 3 * g.ho() * g.wo() * 9);
  EXPECT_EQ(t.zero_fill_i, 0);
  EXPECT_EQ(t.stores_o, int64_t{2} * 3 * g.ho() * g.wo());
}

}  // namespace
}  // namespace dwconv
