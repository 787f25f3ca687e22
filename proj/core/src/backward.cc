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

#include "dwconv/backward.h"

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
using detail::FilterTaps;
using detail::VL;

constexpr int kMaxBackwardRows = 6;
constexpr int kMaxBackwardVectors = 2;  // tile width 8 or 16

template <class Counter>
using BackwardKernel = void (*)(const ConstPlane&, float*, int,
                                const FilterTaps&, int, int, int, int, Counter&);

template <class Counter, bool kOdd, int... H>
constexpr auto backward_table(std::integer_sequence<int, H...>) {
  return std::array<std::array<BackwardKernel<Counter>, kMaxBackwardVectors>,
                    sizeof...(H)>{
      {{{&detail::backward_s2_tile<H + 1, 1, kOdd, Counter>,
         &detail::backward_s2_tile<H + 1, 2, kOdd, Counter>}}...}};
}

template <class Counter>
BackwardKernel<Counter> backward_kernel(int hr, int k, bool a0_odd) {
  static constexpr auto kOdd = backward_table<Counter, true>(
      std::make_integer_sequence<int, kMaxBackwardRows>{});
  static constexpr auto kEven = backward_table<Counter, false>(
      std::make_integer_sequence<int, kMaxBackwardRows>{});
  return (a0_odd ? kOdd : kEven)[hr - 1][k - 1];
}

bool backward_tile_compiled(const TileConfig& t) {
  return t.vl == VL && t.hr >= 1 && t.hr <= kMaxBackwardRows &&
         (t.wr == 2 * VL || t.wr == 4 * VL) && tile_is_legal(t);
}

void check_backward_inputs(const TensorNCHW& dout, const FilterSet& filters,
                           const ConvGeometry& g) {
  detail::check_direct_shapes(dout, g.n(), g.c(), g.ho(), g.wo(), "output gradient");
  if (filters.c() != g.c() || filters.hf() != g.hf() || filters.wf() != g.wf()) {
    throw ShapeError("filter shape does not match geometry");
  }
}

void record(MeasuredTraffic* traffic, const detail::TallyCounter& t) {
  if (!traffic) return;
  traffic->loads_o += t.input;
  traffic->loads_f += t.filter;
  traffic->stores_i += t.output_stores;
  traffic->zero_fill_i += t.zeros;
}

template <class Counter>
void backward_s2_pass(const TensorNCHW& dout, const FilterSet& filters,
                      const ConvGeometry& g, const TileSchedule& sched,
                      const PassOptions& options, TensorNCHW& din,
                      Counter* total) {
  const WorkPlan wp = plan(g, PassKind::kBackward, resolve_threads(options.threads),
                           options.cb, sched.row_quantum);
  const bool a0_odd = (g.pl() & 1) != 0;  // tiles start at even columns
  detail::run_plan<Counter>(
      wp,
      [&](const WorkItem& item, Counter& ctr) {
        for (int n = item.n0; n < item.n1; ++n) {
          for (int c = item.c0; c < item.c1; ++c) {
            const FilterTaps taps = detail::load_filter_taps(filters.channel(c), ctr);
            const ConstPlane src{dout.plane(n, c), g.ho(), g.wo()};
            float* dst = din.plane(n, c);
            for (const TileBand& band : sched.bands) {
              if (band.ho0 < item.h0 || band.ho0 >= item.h1) continue;
              for (const TileSpan& span : band.spans) {
                const auto kernel =
                    backward_kernel<Counter>(band.rows, span.wr / (2 * VL), a0_odd);
                for (int t = 0; t < span.count; ++t) {
                  kernel(src, dst, g.wi(), taps, band.ho0, span.wo0 + t * span.wr,
                         g.pt(), g.pl(), ctr);
                }
              }
              for (int hi = band.ho0; hi < band.ho0 + band.rows; ++hi) {
                float* row = dst + static_cast<std::ptrdiff_t>(hi) * g.wi();
                for (int wi = band.scalar_wo0; wi < g.wi(); ++wi) {
                  row[wi] = detail::backward_s2_point(src, taps, hi, wi, g.pt(),
                                                      g.pl(), ctr);
                  ctr.store_output(1);
                }
              }
            }
          }
        }
      },
      total);
}

}  // namespace

RotatedFilterSet rotate_filter_180(const FilterSet& f) {
  FilterSet r(f.c(), f.hf(), f.wf());
  for (int c = 0; c < f.c(); ++c) {
    for (int h = 0; h < f.hf(); ++h) {
      for (int w = 0; w < f.wf(); ++w) {
        r.at(c, h, w) = f.at(c, f.hf() - 1 - h, f.wf() - 1 - w);
      }
    }
  }
  return RotatedFilterSet(std::move(r));
}

FilterSet rotate_filter_180(const RotatedFilterSet& rotated) {
  return rotate_filter_180(rotated.filters()).filters();
}

ConvGeometry backward_as_forward_geometry(const ConvGeometry& g) {
  if (g.stride() != 1) {
    throw UnsupportedConfiguration("rotated-filter backward needs stride 1");
  }
  // dI (Hi) = dO (Ho) + pt' + pb' - Hf + 1 with pt' = Hf-1-pt, pb' = Hf-1-pb.
  return ConvGeometry(ConvParams{g.n(), g.c(), g.ho(), g.wo(), g.hf(), g.wf(), 1,
                                 g.hf() - 1 - g.pt(), g.hf() - 1 - g.pb(),
                                 g.wf() - 1 - g.pl(), g.wf() - 1 - g.pr()});
}

bool backward_direct_supported(const ConvGeometry& g) {
  return g.hf() == 3 && g.wf() == 3 && (g.stride() == 1 || g.stride() == 2);
}

ParityTaps stride2_taps(const ConvGeometry& g, int hi, int wi) {
  ParityTaps taps;
  for (int hf = 0; hf < g.hf(); ++hf) {
    const int t = hi + g.pt() - hf;
    if (t >= 0 && t % 2 == 0 && t / 2 < g.ho()) taps.rows[taps.row_count++] = hf;
  }
  for (int wf = 0; wf < g.wf(); ++wf) {
    const int t = wi + g.pl() - wf;
    if (t >= 0 && t % 2 == 0 && t / 2 < g.wo()) taps.cols[taps.col_count++] = wf;
  }
  return taps;
}

TensorNCHW backward_direct_s1(const TensorNCHW& dout, const FilterSet& filters,
                              const ConvGeometry& g, const PassOptions& options) {
  if (!backward_direct_supported(g) || g.stride() != 1) {
    throw UnsupportedConfiguration("stride-1 direct backward needs a 3x3 filter: " +
                                   g.to_string());
  }
  check_backward_inputs(dout, filters, g);
  const ConvGeometry as_forward = backward_as_forward_geometry(g);
  const RotatedFilterSet rotated = rotate_filter_180(filters);
  TensorNCHW din(g.n(), g.c(), g.hi(), g.wi());
  if (options.traffic) {
    detail::TallyCounter tally;
    detail::forward_pass(dout, rotated.filters(), as_forward, options, din, &tally);
    record(options.traffic, tally);
  } else {
    detail::forward_pass(dout, rotated.filters(), as_forward, options, din, nullptr);
  }
  return din;
}

TensorNCHW backward_direct_s2(const TensorNCHW& dout, const FilterSet& filters,
                              const ConvGeometry& g, const PassOptions& options) {
  if (!backward_direct_supported(g) || g.stride() != 2) {
    throw UnsupportedConfiguration("stride-2 direct backward needs a 3x3 filter: " +
                                   g.to_string());
  }
  check_backward_inputs(dout, filters, g);
  const TileConfig tile = options.tile.value_or(TileConfig{6, 8});
  if (!backward_tile_compiled(tile)) {
    throw UnsupportedConfiguration("no stride-2 backward kernel for tile " +
                                   tile.to_string());
  }
  const TileSchedule sched = make_schedule(g.hi(), g.wi(), tile, 2 * VL);
  TensorNCHW din(g.n(), g.c(), g.hi(), g.wi());
  if (options.traffic) {
    detail::TallyCounter tally;
    backward_s2_pass<detail::TallyCounter>(dout, filters, g, sched, options, din,
                                           &tally);
    record(options.traffic, tally);
  } else {
    backward_s2_pass<detail::NoCounter>(dout, filters, g, sched, options, din,
                                        nullptr);
  }
  return din;
}

TensorNCHW backward_direct(const TensorNCHW& dout, const FilterSet& filters,
                           const ConvGeometry& g, const PassOptions& options) {
  if (g.stride() == 1) return backward_direct_s1(dout, filters, g, options);
  return backward_direct_s2(dout, filters, g, options);
}

}  // namespace dwconv
