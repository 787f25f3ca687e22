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

#include <string>
#include <vector>

#include "dwconv/geometry.h"
#include "dwconv/lane_vector.h"

namespace dwconv {

// Register tile of H_r x W_r outputs, vectorized along width in groups of
// `vl` lanes.
struct TileConfig {
  int hr = 4;
  int wr = 4;
  int vl = kVectorLanes;

  int vectors_per_row() const noexcept { return wr / vl; }
  std::string to_string() const;

  friend bool operator==(const TileConfig&, const TileConfig&) = default;
};

inline constexpr int kVectorRegisterBudget = 32;

// wr is a positive multiple of vl and the tile fits the register budget:
// hr*(wr/vl) output vectors + wf*(wr/vl) extracted input vectors + hf
// filter vectors <= 32.
bool tile_is_legal(const TileConfig& tile, int hf = 3, int wf = 3);

// Parses "HxW", e.g. "4x4". Throws std::invalid_argument.
TileConfig parse_tile(const std::string& text);

// A run of `count` side-by-side tiles of width `wr` starting at column wo0.
struct TileSpan {
  int wo0 = 0;
  int wr = 0;
  int count = 0;
};

// Rows [ho0, ho0 + rows) of the output. Columns covered by `spans` use
// rows x wr tiles; columns [scalar_wo0, width) go through the scalar path.
// A band with no spans is handled entirely by the scalar path.
struct TileBand {
  int ho0 = 0;
  int rows = 0;
  std::vector<TileSpan> spans;
  int scalar_wo0 = 0;
};

// Partition of an H x W output into tile bands.
struct TileSchedule {
  int height = 0;
  int width = 0;
  std::vector<TileBand> bands;

  // Main (largest) tile height; the row quantum used when splitting work
  // across threads.
  int row_quantum = 1;
};

// Generic schedule: bands of `main.hr` rows, the remainder as one
// reduced-height band. Within a band, tiles of `main.wr` columns, then the
// widest `min_wr * 2^k` < main.wr that still fits, down to `min_wr`, then
// the scalar tail.
TileSchedule make_schedule(int height, int width, const TileConfig& main,
                           int min_wr);

// Forward tile policy. Stride 1: 4x4 main tiles; remaining 2 or 3 rows use
// 2x8 tiles (2x4 where only 4 columns are left); 2x8 is also the main tile
// when H_o is 2 or 3 and W_o >= 8; a final single row is scalar.
// Stride 2: 1x4 tiles, scalar column tail.
TileSchedule select_tile(const ConvGeometry& geom);

}  // namespace dwconv
