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

#include <optional>
#include <vector>

#include "dwconv/geometry.h"
#include "dwconv/lane_vector.h"
#include "dwconv/tensor.h"
#include "dwconv/tile.h"
#include "dwconv/traffic_counter.h"

namespace dwconv {

// Knobs shared by the direct passes.
struct PassOptions {
  // Worker threads; 0 means hardware concurrency.
  int threads = 1;
  // Channel block size C_b; 0 picks the default heuristic.
  int cb = 0;
  // Overrides the main register tile. Remainders still use reduced tiles and
  // the scalar path.
  std::optional<TileConfig> tile;
  // When set, the pass runs its instrumented kernels and adds its element
  // transfers here.
  MeasuredTraffic* traffic = nullptr;
};

// True when forward_direct has a vectorized path for this geometry:
// 3x3 filter, stride 1 or 2.
bool forward_direct_supported(const ConvGeometry& geom);

// Implicit-padding row extraction for a 3-wide filter. Returns 3*(count/vl)
// vectors; vector w*3+q, lane j holds row[wi0 + (w*vl + j)*stride + q] when
// that column lies in [0, width) and 0.0 otherwise. A null `row` stands for a
// row outside the vertical bounds and yields all zeros.
std::vector<LaneVector> extract_padded_row(const float* row, int width,
                                           int wi0, int count, int stride);

// One H_r x W_r register tile of the forward pass for plane (n, c) with its
// top-left output at (ho0, wo0). The tile must lie inside the output.
// Returns the tile row-major.
std::vector<float> forward_kernel_tile(const TensorNCHW& input,
                                       const FilterSet& filters,
                                       const ConvGeometry& geom,
                                       const TileConfig& tile, int n, int c,
                                       int ho0, int wo0,
                                       MeasuredTraffic* traffic = nullptr);

// Tiled, lane-vectorized direct forward pass with implicit padding.
// Throws UnsupportedConfiguration when !forward_direct_supported(geom) or the
// tile override is not one of the compiled shapes (hr 1..6, wr 4 or 8).
TensorNCHW forward_direct(const TensorNCHW& input, const FilterSet& filters,
                          const ConvGeometry& geom,
                          const PassOptions& options = {});

}  // namespace dwconv
