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

#include "dwconv/analysis.h"

#include <random>

#include "dwconv/backward.h"
#include "dwconv/error.h"
#include "dwconv/forward.h"
#include "dwconv/reference.h"
#include "dwconv/wgrad.h"

namespace dwconv {
namespace {

constexpr double kBytesPerElement = 4.0;

double ceil_div(double a, double b) {
  return static_cast<double>((static_cast<long long>(a) + static_cast<long long>(b) - 1) /
                             static_cast<long long>(b));
}

void fill_random(std::span<float> data, std::mt19937& rng) {
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  for (float& x : data) x = dist(rng);
}

}  // namespace

std::int64_t tile_input_elements(const ConvGeometry& g, const TileConfig& tile) {
  const std::int64_t s = g.stride();
  return ((tile.wr - 1) * s + g.wf()) * ((tile.hr - 1) * s + g.hf());
}

TrafficReport traffic_ours(const ConvGeometry& g, const TileConfig& tile) {
  TrafficReport r;
  const double nc = static_cast<double>(g.n()) * g.c();
  const double out = static_cast<double>(g.ho()) * g.wo();
  r.ta = 2.0 * nc * out * g.hf() * g.wf();
  r.tc_f = kBytesPerElement * nc * g.hf() * g.wf();
  r.tc_o = kBytesPerElement * nc * out;
  r.approximate = g.ho() % tile.hr != 0 || g.wo() % tile.wr != 0;
  const double invocations =
      ceil_div(g.ho(), tile.hr) * ceil_div(g.wo(), tile.wr);
  r.tc_i = kBytesPerElement * nc * invocations *
           static_cast<double>(tile_input_elements(g, tile));
  r.tc_total = r.tc_f + r.tc_o + r.tc_i;
  r.ai = r.ta / r.tc_total;
  return r;
}

TrafficReport traffic_tengine(const ConvGeometry& g) {
  TrafficReport r;
  const double nc = static_cast<double>(g.n()) * g.c();
  const double out = static_cast<double>(g.ho()) * g.wo();
  r.ta = 2.0 * nc * out * g.hf() * g.wf();
  r.tc_i = kBytesPerElement * nc * g.hi() * g.wi();
  r.tc_f = kBytesPerElement * nc * g.hf() * g.wf();
  // Output rows are re-loaded twice and stored three times: 5 transfers.
  r.tc_o = kBytesPerElement * 5.0 * nc * out;
  r.tc_total = r.tc_i + r.tc_f + r.tc_o;
  r.ai = r.ta / r.tc_total;
  return r;
}

TileConfig default_forward_tile(const ConvGeometry& g) {
  if (g.stride() != 1) return TileConfig{1, 4};
  if ((g.ho() == 2 || g.ho() == 3) && g.wo() >= 8) return TileConfig{2, 8};
  return TileConfig{4, 4};
}

MeasuredTraffic measure_traffic(PassKind kind, const ConvGeometry& g,
                                const TileConfig& tile, Implementation impl,
                                int threads) {
  std::mt19937 rng(0x5eed);
  TensorNCHW input(g.n(), g.c(), g.hi(), g.wi());
  TensorNCHW dout(g.n(), g.c(), g.ho(), g.wo());
  FilterSet filters(g.c(), g.hf(), g.wf());
  fill_random(input.data(), rng);
  fill_random(dout.data(), rng);
  fill_random(filters.data(), rng);

  MeasuredTraffic traffic;
  if (impl == Implementation::kNaive) {
    if (kind != PassKind::kForward) {
      throw UnsupportedConfiguration("naive traffic is measured for the forward "
                                     "pass only");
    }
    reference::forward_naive(input, filters, g, &traffic);
    return traffic;
  }

  PassOptions options;
  options.threads = threads;
  options.tile = tile;
  options.traffic = &traffic;
  switch (kind) {
    case PassKind::kForward:
      forward_direct(input, filters, g, options);
      break;
    case PassKind::kBackward:
      backward_direct(dout, filters, g, options);
      break;
    case PassKind::kWeightGrad:
      wgrad_direct(input, dout, g, options);
      break;
  }
  return traffic;
}

}  // namespace dwconv
