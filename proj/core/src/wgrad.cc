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

#include "dwconv/wgrad.h"

#include <array>
#include <string>
#include <utility>

#include "detail/kernels.h"
#include "detail/passes.h"
#include "dwconv/error.h"
#include "dwconv/parallel.h"

namespace dwconv {
namespace {

using detail::ConstPlane;
using detail::VL;

constexpr int kMaxWgradRows = 4;
constexpr int kWgradWidths[] = {1, 4, 8};

template <class Counter>
using WgradKernel = void (*)(const ConstPlane&, const ConstPlane&, int, int, int,
                             int, LaneVector*, Counter&);

template <class Counter, int S, int... H>
constexpr auto wgrad_table(std::integer_sequence<int, H...>) {
  return std::array<std::array<WgradKernel<Counter>, 3>, sizeof...(H)>{
      {{{&detail::wgrad_tile<S, H + 1, 1, Counter>,
         &detail::wgrad_tile<S, H + 1, 4, Counter>,
         &detail::wgrad_tile<S, H + 1, 8, Counter>}}...}};
}

int width_slot(int wr) {
  for (int i = 0; i < 3; ++i) {
    if (kWgradWidths[i] == wr) return i;
  }
  return -1;
}

template <class Counter>
WgradKernel<Counter> wgrad_kernel(int s, int hr, int wr) {
  static constexpr auto kStride1 =
      wgrad_table<Counter, 1>(std::make_integer_sequence<int, kMaxWgradRows>{});
  static constexpr auto kStride2 =
      wgrad_table<Counter, 2>(std::make_integer_sequence<int, kMaxWgradRows>{});
  return (s == 1 ? kStride1 : kStride2)[hr - 1][width_slot(wr)];
}

bool wgrad_tile_compiled(const TileConfig& t) {
  return t.vl == VL && t.hr >= 1 && t.hr <= kMaxWgradRows &&
         (t.wr == VL || t.wr == 2 * VL) && tile_is_legal(t);
}

void check_wgrad_inputs(const TensorNCHW& input, const TensorNCHW& dout,
                        const ConvGeometry& g) {
  detail::check_direct_shapes(input, g.n(), g.c(), g.hi(), g.wi(), "input");
  detail::check_direct_shapes(dout, g.n(), g.c(), g.ho(), g.wo(), "output gradient");
}

// All batches and tiles of one channel, in a fixed order: batch, then bands
// top to bottom, tiles left to right, then the scalar cells of the band.
template <class Counter>
void accumulate_channel(const TensorNCHW& input, const TensorNCHW& dout,
                        const ConvGeometry& g, int c, const TileSchedule& sched,
                        LaneVector* acc, Counter& ctr) {
  const int s = g.stride();
  const auto cell = wgrad_kernel<Counter>(s, 1, 1);
  for (int n = 0; n < g.n(); ++n) {
    const ConstPlane in{input.plane(n, c), g.hi(), g.wi()};
    const ConstPlane dO{dout.plane(n, c), g.ho(), g.wo()};
    for (const TileBand& band : sched.bands) {
      for (const TileSpan& span : band.spans) {
        const auto kernel = wgrad_kernel<Counter>(s, band.rows, span.wr);
        for (int t = 0; t < span.count; ++t) {
          kernel(in, dO, band.ho0, span.wo0 + t * span.wr, g.pt(), g.pl(), acc, ctr);
        }
      }
      for (int ho = band.ho0; ho < band.ho0 + band.rows; ++ho) {
        for (int wo = band.scalar_wo0; wo < g.wo(); ++wo) {
          cell(in, dO, ho, wo, g.pt(), g.pl(), acc, ctr);
        }
      }
    }
  }
}

TileSchedule wgrad_schedule(const ConvGeometry& g, const TileConfig& tile) {
  return make_schedule(g.ho(), g.wo(), tile, VL);
}

TileConfig checked_tile(const ConvGeometry& g, const PassOptions& options) {
  const TileConfig tile = options.tile.value_or(default_wgrad_tile(g.stride()));
  if (!wgrad_tile_compiled(tile)) {
    throw UnsupportedConfiguration("no weight-gradient kernel for tile " +
                                   tile.to_string());
  }
  return tile;
}

template <class Counter>
void wgrad_pass(const TensorNCHW& input, const TensorNCHW& dout,
                const ConvGeometry& g, const TileSchedule& sched,
                const PassOptions& options, FilterSet& df, Counter* total) {
  const WorkPlan wp =
      plan(g, PassKind::kWeightGrad, resolve_threads(options.threads), 1, 1);
  detail::run_plan<Counter>(
      wp,
      [&](const WorkItem& item, Counter& ctr) {
        for (int c = item.c0; c < item.c1; ++c) {
          LaneAccumulator acc;
          accumulate_channel(input, dout, g, c, sched, acc.rows.data(), ctr);
          // Lanes 0..Wf-1 of each row are dF[c][hf][*].
          for (int hf = 0; hf < 3; ++hf) {
            const auto lanes = acc.rows[hf].to_array();
            for (int q = 0; q < 3; ++q) df.at(c, hf, q) = lanes[q];
          }
          ctr.store_output(9);
        }
      },
      total);
}

}  // namespace

TileConfig default_wgrad_tile(int stride) {
  return stride == 1 ? TileConfig{2, 4} : TileConfig{1, 4};
}

bool wgrad_direct_supported(const ConvGeometry& g) {
  return g.hf() == 3 && g.wf() == 3 && (g.stride() == 1 || g.stride() == 2);
}

void wgrad_kernel_tile(const TensorNCHW& input, const TensorNCHW& dout,
                       const ConvGeometry& g, const TileConfig& tile, int n,
                       int c, int ho0, int wo0, LaneAccumulator& acc,
                       MeasuredTraffic* traffic) {
  if (!wgrad_direct_supported(g) ||
      !(wgrad_tile_compiled(tile) || (tile.hr == 1 && tile.wr == 1))) {
    throw UnsupportedConfiguration("no weight-gradient kernel for tile " +
                                   tile.to_string());
  }
  check_wgrad_inputs(input, dout, g);
  if (ho0 < 0 || wo0 < 0 || ho0 + tile.hr > g.ho() || wo0 + tile.wr > g.wo() ||
      n < 0 || n >= g.n() || c < 0 || c >= g.c()) {
    throw ShapeError("tile lies outside the output gradient");
  }
  const ConstPlane in{input.plane(n, c), g.hi(), g.wi()};
  const ConstPlane dO{dout.plane(n, c), g.ho(), g.wo()};
  if (traffic) {
    detail::TallyCounter ctr;
    wgrad_kernel<detail::TallyCounter>(g.stride(), tile.hr, tile.wr)(
        in, dO, ho0, wo0, g.pt(), g.pl(), acc.rows.data(), ctr);
    traffic->loads_i += ctr.input;
    traffic->loads_o += ctr.output_loads;
    traffic->zero_fill_i += ctr.zeros;
  } else {
    detail::NoCounter ctr;
    wgrad_kernel<detail::NoCounter>(g.stride(), tile.hr, tile.wr)(
        in, dO, ho0, wo0, g.pt(), g.pl(), acc.rows.data(), ctr);
  }
}

LaneAccumulator wgrad_channel(const TensorNCHW& input, const TensorNCHW& dout,
                              const ConvGeometry& g, int c,
                              const TileConfig& tile) {
  if (!wgrad_direct_supported(g) || !wgrad_tile_compiled(tile)) {
    throw UnsupportedConfiguration("no weight-gradient kernel for tile " +
                                   tile.to_string());
  }
  check_wgrad_inputs(input, dout, g);
  LaneAccumulator acc;
  detail::NoCounter ctr;
  accumulate_channel(input, dout, g, c, wgrad_schedule(g, tile), acc.rows.data(),
                     ctr);
  return acc;
}

FilterSet wgrad_direct(const TensorNCHW& input, const TensorNCHW& dout,
                       const ConvGeometry& g, const PassOptions& options) {
  if (!wgrad_direct_supported(g)) {
    throw UnsupportedConfiguration("direct weight gradient needs a 3x3 filter "
                                   "and stride 1 or 2: " + g.to_string());
  }
  check_wgrad_inputs(input, dout, g);
  const TileSchedule sched = wgrad_schedule(g, checked_tile(g, options));
  FilterSet df(g.c(), 3, 3);
  if (options.traffic) {
    detail::TallyCounter tally;
    wgrad_pass<detail::TallyCounter>(input, dout, g, sched, options, df, &tally);
    options.traffic->loads_i += tally.input;
    options.traffic->loads_o += tally.output_loads;
    options.traffic->stores_f += tally.output_stores;
    options.traffic->zero_fill_i += tally.zeros;
  } else {
    wgrad_pass<detail::NoCounter>(input, dout, g, sched, options, df, nullptr);
  }
  return df;
}

}  // namespace dwconv
