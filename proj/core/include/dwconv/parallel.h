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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dwconv/geometry.h"

namespace dwconv {

enum class PassKind { kForward, kBackward, kWeightGrad };

const char* to_string(PassKind kind);

// Half-open ranges over batch, channel and output rows. For the backward pass
// the rows are dI rows; for wgrad the row range always spans everything.
struct WorkItem {
  int n0 = 0, n1 = 0;
  int c0 = 0, c1 = 0;
  int h0 = 0, h1 = 0;

  friend bool operator==(const WorkItem&, const WorkItem&) = default;
};

struct WorkPlan {
  std::vector<WorkItem> items;
  int cb = 1;
  int threads = 1;
};

// Default channel block: min(C, max(1, C*N / (4*threads))) rounded down to a
// power of two.
int default_channel_block(int n, int c, int threads);

// Worker count to use for a requested value; 0 resolves to the
// DWCONV_THREADS environment variable, else hardware concurrency.
int resolve_threads(int requested);

// Forward/backward: one item per (n, channel block). When that gives fewer
// items than threads, each item's rows are split into contiguous blocks of
// whole `row_quantum` rows until there are at least `threads` items or every
// block is a single quantum. Weight gradient: one item per channel.
// cb = 0 picks default_channel_block; row_quantum = 0 picks the main tile
// height of the pass's default schedule.
WorkPlan plan(const ConvGeometry& geom, PassKind kind, int threads, int cb = 0,
              int row_quantum = 0);

// Runs every item exactly once on up to plan.threads workers (the calling
// thread included). Work functions must write only inside their item. If an
// item throws, remaining items are abandoned and the first exception is
// rethrown after all workers stop.
void execute(const WorkPlan& plan,
             const std::function<void(const WorkItem&)>& work);

}  // namespace dwconv
