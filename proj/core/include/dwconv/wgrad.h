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

#include <array>

#include "dwconv/forward.h"
#include "dwconv/geometry.h"
#include "dwconv/lane_vector.h"
#include "dwconv/tensor.h"

namespace dwconv {

// dF of one channel held as Hf rows of vl lanes; lane q of row hf
// accumulates dF[c,hf,q]. Lanes q >= Wf stay exactly zero.
struct LaneAccumulator {
  std::array<LaneVector, 3> rows{LaneVector::zero(), LaneVector::zero(),
                                 LaneVector::zero()};
};

bool wgrad_direct_supported(const ConvGeometry& geom);

// Accumulates one H_r x W_r block of dO (top-left (ho0, wo0), inside the
// output) of plane (n, c) into `acc`.
void wgrad_kernel_tile(const TensorNCHW& input, const TensorNCHW& dout,
                       const ConvGeometry& geom, const TileConfig& tile, int n,
                       int c, int ho0, int wo0, LaneAccumulator& acc,
                       MeasuredTraffic* traffic = nullptr);

// Runs every batch and tile of channel c into a fresh accumulator.
LaneAccumulator wgrad_channel(const TensorNCHW& input, const TensorNCHW& dout,
                              const ConvGeometry& geom, int c,
                              const TileConfig& tile);

// Default tiles: 2x4 for stride 1, 1x4 for stride 2.
TileConfig default_wgrad_tile(int stride);

// Direct weight gradient: channels in parallel, each accumulated over batches
// and tiles in a fixed order, then lanes 0..Wf-1 copied out.
// Throws UnsupportedConfiguration when !wgrad_direct_supported(geom).
FilterSet wgrad_direct(const TensorNCHW& input, const TensorNCHW& dout,
                       const ConvGeometry& geom,
                       const PassOptions& options = {});

}  // namespace dwconv
