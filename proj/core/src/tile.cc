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

#include "dwconv/tile.h"

#include <charconv>
#include <stdexcept>

namespace dwconv {
namespace {

// Spans for one band: widest tiles first, halving down to min_wr.
TileBand make_band(int ho0, int rows, int width, int wr, int min_wr) {
  TileBand band;
  band.ho0 = ho0;
  band.rows = rows;
  int wo = 0;
  for (int w = wr; w >= min_wr; w /= 2) {
    const int count = (width - wo) / w;
    if (count > 0) {
      band.spans.push_back(TileSpan{wo, w, count});
      wo += count * w;
    }
    if (w == min_wr) break;
  }
  band.scalar_wo0 = wo;
  return band;
}

TileBand scalar_band(int ho0, int rows, int width) {
  TileBand band;
  band.ho0 = ho0;
  band.rows = rows;
  band.scalar_wo0 = 0;
  (void)width;
  return band;
}

}  // namespace

std::string TileConfig::to_string() const {
  return std::to_string(hr) + "x" + std::to_string(wr);
}

bool tile_is_legal(const TileConfig& tile, int hf, int wf) {
  if (tile.vl < 1 || tile.hr < 1 || tile.wr < tile.vl) return false;
  if (tile.wr % tile.vl != 0) return false;
  const int wn = tile.wr / tile.vl;
  return tile.hr * wn + wf * wn + hf <= kVectorRegisterBudget;
}

TileConfig parse_tile(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw std::invalid_argument("tile must be HxW");
  TileConfig t;
  auto parse = [&](std::string_view s, int& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p != s.data() + s.size() || out < 1) {
      throw std::invalid_argument("bad tile '" + text + "'");
    }
  };
  const std::string_view sv(text);
  parse(sv.substr(0, x), t.hr);
  parse(sv.substr(x + 1), t.wr);
  return t;
}

TileSchedule make_schedule(int height, int width, const TileConfig& main,
                           int min_wr) {
  TileSchedule s;
  s.height = height;
  s.width = width;
  s.row_quantum = main.hr;
  int ho = 0;
  for (; ho + main.hr <= height; ho += main.hr) {
    s.bands.push_back(make_band(ho, main.hr, width, main.wr, min_wr));
  }
  if (ho < height) {
    s.bands.push_back(make_band(ho, height - ho, width, main.wr, min_wr));
  }
  return s;
}

TileSchedule select_tile(const ConvGeometry& geom) {
  const int ho = geom.ho();
  const int wo = geom.wo();
  if (geom.stride() != 1) {
    return make_schedule(ho, wo, TileConfig{1, 4}, 4);
  }

  TileSchedule s;
  s.height = ho;
  s.width = wo;
  if ((ho == 2 || ho == 3) && wo >= 8) {
    s.row_quantum = 2;
    s.bands.push_back(make_band(0, 2, wo, 8, 4));
    if (ho == 3) s.bands.push_back(scalar_band(2, 1, wo));
    return s;
  }

  s.row_quantum = 4;
  int h = 0;
  for (; h + 4 <= ho; h += 4) s.bands.push_back(make_band(h, 4, wo, 4, 4));
  if (ho - h >= 2) {
    s.bands.push_back(make_band(h, 2, wo, 8, 4));
    h += 2;
  }
  if (h < ho) s.bands.push_back(scalar_band(h, ho - h, wo));
  return s;
}

}  // namespace dwconv
