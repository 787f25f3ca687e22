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

#include <mutex>
#include <optional>

#include "dwconv/forward.h"
#include "dwconv/parallel.h"
#include "dwconv/tensor.h"
#include "dwconv/tile.h"
#include "dwconv/traffic_counter.h"

namespace dwconv::detail {

// Runs body(item, counter) for every plan item. With an enabled counter each
// item tallies locally and merges into *total when it finishes.
template <class Counter, class Body>
void run_plan(const WorkPlan& plan, Body&& body, Counter* total) {
  if constexpr (Counter::kEnabled) {
    std::mutex mu;
    execute(plan, [&](const WorkItem& item) {
      Counter local;
      body(item, local);
      std::lock_guard<std::mutex> lock(mu);
      *total += local;
    });
  } else {
    (void)total;
    execute(plan, [&](const WorkItem& item) {
      Counter c;
      body(item, c);
    });
  }
}

// Forward schedule for `geom`, honoring a tile override. Throws
// UnsupportedConfiguration for tiles without a compiled kernel.
TileSchedule forward_schedule(const ConvGeometry& geom,
                              const std::optional<TileConfig>& tile);

// Direct forward into `out` (preallocated N x C x Ho x Wo). When `tally` is
// set the instrumented kernels run and their role counts are added to it.
void forward_pass(const TensorNCHW& input, const FilterSet& filters,
                  const ConvGeometry& geom, const PassOptions& options,
                  TensorNCHW& out, TallyCounter* tally);

void check_direct_shapes(const TensorNCHW& t, int n, int c, int h, int w,
                         const char* what);

}  // namespace dwconv::detail
