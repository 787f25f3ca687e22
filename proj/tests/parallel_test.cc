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

#include <atomic>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "dwconv/backward.h"
#include "dwconv/forward.h"
#include "dwconv/layer_suite.h"
#include "dwconv/parallel.h"
#include "dwconv/wgrad.h"
#include "testing/test_util.h"

namespace dwconv {
namespace {

std::vector<float> values(std::span<const float> s) { return {s.begin(), s.end()}; }

TEST(ChannelBlock, DefaultHeuristic) {
  EXPECT_EQ(default_channel_block(256, 32, 16), 32);  // min(C, 128)
  EXPECT_EQ(default_channel_block(1, 32, 1), 8);
  EXPECT_EQ(default_channel_block(1, 96, 1), 16);     // 24 rounded down
  EXPECT_EQ(default_channel_block(1, 8, 48), 1);
  EXPECT_EQ(default_channel_block(1, 3, 1), 1);   // 3/4 clamps up to 1
  EXPECT_EQ(default_channel_block(4, 3, 1), 2);   // 3 rounded down
}

TEST(Plan, LargeBatchNeedsNoRowSplit) {
  const auto g = ConvGeometry::make(256, 32, 56, 56, 1);
  const auto wp = plan(g, PassKind::kForward, 16, 8);
  EXPECT_EQ(wp.items.size(), 1024u);
  for (const auto& item : wp.items) {
    EXPECT_EQ(item.h0, 0);
    EXPECT_EQ(item.h1, g.ho());
    EXPECT_EQ(item.c1 - item.c0, 8);
  }
}

TEST(Plan, FewChannelsSplitAlongRows) {
  const auto g = ConvGeometry::make(1, 8, 112, 112, 1);
  const auto wp = plan(g, PassKind::kForward, 48, 1);
  EXPECT_GE(wp.items.size(), 48u);
  std::vector<int> blocks(8, 0);
  for (const auto& item : wp.items) {
    ++blocks[item.c0];
    EXPECT_EQ(item.h0 % 4, 0);  // whole 4-row tile blocks
    EXPECT_LT(item.h0, item.h1);
  }
  for (int b : blocks) EXPECT_GE(b, 6);
}

TEST(Plan, RowSplitLimitedByHeight) {
  const auto g = ConvGeometry::make(1, 1, 7, 7, 1);
  const auto wp = plan(g, PassKind::kForward, 64, 1);
  EXPECT_EQ(wp.items.size(), 2u);  // quanta [0,4) and [4,7)
}

// Every (n, c, row) cell of the pass's output is owned by exactly one item.
void expect_partition(const ConvGeometry& g, PassKind kind, const WorkPlan& wp) {
  const int rows = kind == PassKind::kBackward ? g.hi() : g.ho();
  std::vector<int> owners(static_cast<std::size_t>(g.n()) * g.c() * rows, 0);
  for (const auto& it : wp.items) {
    ASSERT_TRUE(it.n0 >= 0 && it.n1 <= g.n() && it.c0 >= 0 && it.c1 <= g.c() &&
                it.h0 >= 0 && it.h1 <= rows);
    for (int n = it.n0; n < it.n1; ++n)
      for (int c = it.c0; c < it.c1; ++c)
        for (int h = it.h0; h < it.h1; ++h) ++owners[(static_cast<std::size_t>(n) * g.c() + c) * rows + h];
  }
  for (int o : owners) ASSERT_EQ(o, 1) << g.to_string() << " " << to_string(kind);
}

TEST(Plan, ItemsPartitionTheOutput) {
  std::mt19937 rng(60);
  std::uniform_int_distribution<int> threads(1, 64);
  std::uniform_int_distribution<int> cb(0, 9);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = testing::random_direct_geometry(rng, 3, 60);
    for (auto kind : {PassKind::kForward, PassKind::kBackward, PassKind::kWeightGrad}) {
      expect_partition(g, kind, plan(g, kind, threads(rng), cb(rng)));
    }
  }
}

TEST(Execute, RunsEveryItemOnce) {
  const auto g = ConvGeometry::make(3, 17, 40, 40, 1);
  for (int t : {1, 2, 8}) {
    const auto wp = plan(g, PassKind::kForward, t, 2);
    std::vector<std::atomic<int>> hits(wp.items.size());
    execute(wp, [&](const WorkItem& item) {
      const auto i = static_cast<std::size_t>(&item - wp.items.data());
      hits[i].fetch_add(1);
    });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(Execute, EmptyPlanIsNoOp) {
  WorkPlan wp;
  wp.threads = 4;
  bool called = false;
  execute(wp, [&](const WorkItem&) { called = true; });
  EXPECT_FALSE(called);
}

TEST(Execute, UsesMultipleWorkers) {
  WorkPlan wp;
  wp.threads = 4;
  wp.items.resize(64);
  std::mutex mu;
  std::vector<std::thread::id> ids;
  execute(wp, [&](const WorkItem&) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
    std::lock_guard<std::mutex> lock(mu);
    if (std::find(ids.begin(), ids.end(), std::this_thread::get_id()) == ids.end())
      ids.push_back(std::this_thread::get_id());
  });
  EXPECT_GT(ids.size(), 1u);
  EXPECT_LE(ids.size(), 4u);
}

TEST(Execute, PropagatesFirstException) {
  WorkPlan wp;
  wp.threads = 3;
  wp.items.resize(100);
  std::atomic<int> ran{0};
  EXPECT_THROW(execute(wp,
                       [&](const WorkItem&) {
                         if (ran.fetch_add(1) == 5) throw std::runtime_error("item failed");
                       }),
               std::runtime_error);
  EXPECT_LT(ran.load(), 100);
}

TEST(ResolveThreads, ExplicitEnvironmentAndHardware) {
  EXPECT_EQ(resolve_threads(3), 3);
  ::setenv("DWCONV_THREADS", "5", 1);
  EXPECT_EQ(resolve_threads(0), 5);
  ::unsetenv("DWCONV_THREADS");
  EXPECT_GE(resolve_threads(0), 1);
}

struct Outputs {
  std::vector<float> fwd, bwd, wgrad;
};

Outputs run_all(const ConvGeometry& g, const TensorNCHW& in, const FilterSet& f,
                const TensorNCHW& dout, int threads, int cb = 0) {
  PassOptions opts;
  opts.threads = threads;
  opts.cb = cb;
  return {values(forward_direct(in, f, g, opts).data()),
          values(backward_direct(dout, f, g, opts).data()),
          values(wgrad_direct(in, dout, g, opts).data())};
}

TEST(Determinism, RandomShapesAndThreadCounts) {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = testing::random_direct_geometry(rng, 3, 50);
    const auto in = testing::random_input(g, rng);
    const auto f = testing::random_filters(g.c(), 3, 3, rng);
    const auto dout = testing::random_dout(g, rng);
    const auto base = run_all(g, in, f, dout, 1);
    for (int t : {2, 3, 8}) {
      const auto other = run_all(g, in, f, dout, t, trial % 3);
      EXPECT_EQ(other.fwd, base.fwd) << g.to_string() << " t=" << t;
      EXPECT_EQ(other.bwd, base.bwd) << g.to_string() << " t=" << t;
      EXPECT_EQ(other.wgrad, base.wgrad) << g.to_string() << " t=" << t;
    }
  }
}

TEST(Determinism, SuiteLayers) {
  std::mt19937 rng(62);
  for (const auto& layer : mobilenet_layer_suite()) {
    const auto& g = layer.geometry;
    const auto in = testing::random_input(g, rng);
    const auto f = testing::random_filters(g.c(), 3, 3, rng);
    const auto dout = testing::random_dout(g, rng);
    const auto base = run_all(g, in, f, dout, 1);
    const auto eight = run_all(g, in, f, dout, 8);
    EXPECT_EQ(eight.fwd, base.fwd) << layer.name;
    EXPECT_EQ(eight.bwd, base.bwd) << layer.name;
    EXPECT_EQ(eight.wgrad, base.wgrad) << layer.name;
  }
}

}  // namespace
}  // namespace dwconv
