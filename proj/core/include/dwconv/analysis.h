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

#include <cstdint>

#include "dwconv/geometry.h"
#include "dwconv/parallel.h"
#include "dwconv/tile.h"
#include "dwconv/traffic_counter.h"

namespace dwconv {

// Register <-> cache traffic model of a forward pass, bytes at 4 B/element.
struct TrafficReport {
  double ta = 0;        // arithmetic ops, 2*N*C*Ho*Wo*Hf*Wf
  double tc_f = 0;
  double tc_o = 0;
  double tc_i = 0;
  double tc_total = 0;  // tc_f + tc_o + tc_i
  double ai = 0;        // ta / tc_total
  // Set when the tile does not divide the output; tile counts were rounded
  // up.
  bool approximate = false;
};

// Input elements one H_r x W_r kernel invocation loads:
// ((W_r-1)*s + W_f) * ((H_r-1)*s + H_f).
std::int64_t tile_input_elements(const ConvGeometry& geom,
                                 const TileConfig& tile);

// Traffic of the tiled direct forward pass: F loaded once per (n, c), O
// stored once, and tile_input_elements per kernel invocation.
TrafficReport traffic_ours(const ConvGeometry& geom, const TileConfig& tile);

// Traffic of the row-reuse scheme that re-loads and re-stores output rows:
// TC_tg = 4*(N*C*Hi*Wi + N*C*Hf*Wf + 5*N*C*Ho*Wo). Reported in tc_total; the
// per-tensor fields split it as I, F and 5x O.
TrafficReport traffic_tengine(const ConvGeometry& geom);

// Main forward tile of the default schedule: 4x4 (2x8 when Ho is 2 or 3) for
// stride 1, 1x4 for stride 2.
TileConfig default_forward_tile(const ConvGeometry& geom);

enum class Implementation { kDirect, kNaive };

// Runs one instrumented pass on pseudo-random data of the geometry's shape
// and returns its element transfers. `tile` overrides the pass's main tile.
// Naive measurement is available for the forward pass only.
MeasuredTraffic measure_traffic(PassKind kind, const ConvGeometry& geom,
                                const TileConfig& tile,
                                Implementation impl = Implementation::kDirect,
                                int threads = 1);

}  // namespace dwconv
