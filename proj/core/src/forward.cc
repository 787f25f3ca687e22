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

#include "dwconv/forward.h"

#include <array>
#include <string>
#include <utility>

#include "detail/kernels.h"
#include "detail/passes.h"
#include "dwconv/error.h"
#include "dwconv/parallel.h"

namespace dwconv {
namespace detail {
namespace {

constexpr int kMaxForwardRows = 6;
constexpr int kMaxForwardVectors = 2;

template <class Counter>
using ForwardKernel = void (*)(const ConstPlane&, float*, int,
                               const FilterTaps&, int, int, int, int, Counter&);

template <class Counter, int S, int... H>
constexpr auto forward_table(std::integer_sequence<int, H...>) {
  return std::array<std::array<ForwardKernel<Counter>, kMaxForwardVectors>,
                    sizeof...(H)>{
      {{{&forward_tile<S, H + 1, 1, Counter>,
         &forward_tile<S, H + 1, 2, Counter>}}...}};
}

template <class Counter>
ForwardKernel<Counter> forward_kernel(int s, int hr, int wn) {
  static constexpr auto kStride1 = forward_table<Counter, 1>(
      std::make_integer_sequence<int, kMaxForwardRows>{});
  static constexpr auto kStride2 = forward_table<Counter, 2>(
      std::make_integer_sequence<int, kMaxForwardRows>{});
  if (hr < 1 || hr > kMaxForwardRows || wn < 1 || wn > kMaxForwardVectors) {
    return nullptr;
  }
  return (s == 1 ? kStride1 : kStride2)[hr - 1][wn - 1];
}

bool forward_tile_compiled(const TileConfig& t) {
  return t.vl == VL && t.hr >= 1 && t.hr <= kMaxForwardRows &&
         (t.wr == VL || t.wr == 2 * VL) && tile_is_legal(t);
}

template <class Counter>
void forward_plane(const ConstPlane& in, float* out, const ConvGeometry& g,
                   const FilterTaps& taps, const TileSchedule& sched, int h0,
                   int h1, Counter& ctr) {
  const int s = g.stride();
  for (const TileBand& band : sched.bands) {
    if (band.ho0 < h0 || band.ho0 >= h1) continue;
    for (const TileSpan& span : band.spans) {
      const auto kernel = forward_kernel<Counter>(s, band.rows, span.wr / VL);
      for (int t = 0; t < span.count; ++t) {
        kernel(in, out, g.wo(), taps, band.ho0, span.wo0 + t * span.wr, g.pt(),
               g.pl(), ctr);
      }
    }
    for (int ho = band.ho0; ho < band.ho0 + band.rows; ++ho) {
      float* orow = out + static_cast<std::ptrdiff_t>(ho) * g.wo();
      for (int wo = band.scalar_wo0; wo < g.wo(); ++wo) {
        orow[wo] = forward_point(in, taps, ho, wo, s, g.pt(), g.pl(), ctr);
        ctr.store_output(1);
      }
    }
  }
}

template <class Counter>
void forward_pass_impl(const TensorNCHW& input, const FilterSet& filters,
                       const ConvGeometry& g, const PassOptions& options,
                       TensorNCHW& out, Counter* total) {
  const TileSchedule sched = forward_schedule(g, options.tile);
  const WorkPlan wp = plan(g, PassKind::kForward, resolve_threads(options.threads),
                           options.cb, sched.row_quantum);
  run_plan<Counter>(
      wp,
      [&](const WorkItem& item, Counter& ctr) {
        for (int n = item.n0; n < item.n1; ++n) {
          for (int c = item.c0; c < item.c1; ++c) {
            const FilterTaps taps = load_filter_taps(filters.channel(c), ctr);
            const ConstPlane in{input.plane(n, c), g.hi(), g.wi()};
            forward_plane(in, out.plane(n, c), g, taps, sched, item.h0, item.h1,
                          ctr);
          }
        }
      },
      total);
}

}  // namespace

void check_direct_shapes(const TensorNCHW& t, int n, int c, int h, int w,
                         const char* what) {
  if (t.n() != n || t.c() != c || t.h() != h || t.w() != w) {
    throw ShapeError(std::string(what) + " shape does not match geometry");
  }
}

TileSchedule forward_schedule(const ConvGeometry& g,
                              const std::optional<TileConfig>& tile) {
  if (!tile) return select_tile(g);
  if (!forward_tile_compiled(*tile)) {
    throw UnsupportedConfiguration("no forward kernel for tile " +
                                   tile->to_string());
  }
  return make_schedule(g.ho(), g.wo(), *tile, VL);
}

void forward_pass(const TensorNCHW& input, const FilterSet& filters,
                  const ConvGeometry& g, const PassOptions& options,
                  TensorNCHW& out, TallyCounter* tally) {
  if (tally) {
    forward_pass_impl<TallyCounter>(input, filters, g, options, out, tally);
  } else {
    forward_pass_impl<NoCounter>(input, filters, g, options, out, nullptr);
  }
}

}  // namespace detail

bool forward_direct_supported(const ConvGeometry& g) {
  return g.hf() == 3 && g.wf() == 3 && (g.stride() == 1 || g.stride() == 2);
}

std::vector<LaneVector> extract_padded_row(const float* row, int width, int wi0,
                                           int count, int stride) {
  if (count % kVectorLanes != 0 || count < kVectorLanes ||
      count > 2 * kVectorLanes || (stride != 1 && stride != 2)) {
    throw UnsupportedConfiguration("row extraction supports 4 or 8 outputs at "
                                   "stride 1 or 2");
  }
  const int wn = count / kVectorLanes;
  std::vector<LaneVector> vi(static_cast<std::size_t>(3 * wn), LaneVector::zero());
  if (row == nullptr) return vi;
  detail::NoCounter ctr;
  if (stride == 1) {
    if (wn == 1) detail::extract_row3<1, 1>(row, width, wi0, vi.data(), ctr);
    else detail::extract_row3<1, 2>(row, width, wi0, vi.data(), ctr);
  } else {
    if (wn == 1) detail::extract_row3<2, 1>(row, width, wi0, vi.data(), ctr);
    else detail::extract_row3<2, 2>(row, width, wi0, vi.data(), ctr);
  }
  return vi;
}

std::vector<float> forward_kernel_tile(const TensorNCHW& input,
                                       const FilterSet& filters,
                                       const ConvGeometry& g,
                                       const TileConfig& tile, int n, int c,
                                       int ho0, int wo0,
                                       MeasuredTraffic* traffic) {
  if (!forward_direct_supported(g) || !detail::forward_tile_compiled(tile)) {
    throw UnsupportedConfiguration("no forward kernel for tile " +
                                   tile.to_string());
  }
  detail::check_direct_shapes(input, g.n(), g.c(), g.hi(), g.wi(), "input");
  if (ho0 < 0 || wo0 < 0 || ho0 + tile.hr > g.ho() || wo0 + tile.wr > g.wo() ||
      n < 0 || n >= g.n() || c < 0 || c >= g.c()) {
    throw ShapeError("tile lies outside the output");
  }
  std::vector<float> plane(static_cast<std::size_t>(g.ho()) * g.wo());
  const detail::ConstPlane in{input.plane(n, c), g.hi(), g.wi()};
  const int wn = tile.wr / kVectorLanes;
  auto run = [&](auto& ctr) {
    using Counter = std::remove_reference_t<decltype(ctr)>;
    const auto taps = detail::load_filter_taps(filters.channel(c), ctr);
    detail::forward_kernel<Counter>(g.stride(), tile.hr, wn)(
        in, plane.data(), g.wo(), taps, ho0, wo0, g.pt(), g.pl(), ctr);
  };
  if (traffic) {
    detail::TallyCounter ctr;
    run(ctr);
    traffic->loads_i += ctr.input;
    traffic->loads_f += ctr.filter;
    traffic->stores_o += ctr.output_stores;
    traffic->zero_fill_i += ctr.zeros;
  } else {
    detail::NoCounter ctr;
    run(ctr);
  }
  std::vector<float> out(static_cast<std::size_t>(tile.hr) * tile.wr);
  for (int h = 0; h < tile.hr; ++h) {
    for (int w = 0; w < tile.wr; ++w) {
      out[static_cast<std::size_t>(h) * tile.wr + w] =
          plane[static_cast<std::size_t>(ho0 + h) * g.wo() + wo0 + w];
    }
  }
  return out;
}

TensorNCHW forward_direct(const TensorNCHW& input, const FilterSet& filters,
                          const ConvGeometry& g, const PassOptions& options) {
  if (!forward_direct_supported(g)) {
    throw UnsupportedConfiguration("direct forward needs a 3x3 filter and "
                                   "stride 1 or 2: " + g.to_string());
  }
  detail::check_direct_shapes(input, g.n(), g.c(), g.hi(), g.wi(), "input");
  if (filters.c() != g.c() || filters.hf() != 3 || filters.wf() != 3) {
    throw ShapeError("filter shape does not match geometry");
  }
  TensorNCHW out(g.n(), g.c(), g.ho(), g.wo());
  if (options.traffic) {
    detail::TallyCounter tally;
    detail::forward_pass(input, filters, g, options, out, &tally);
    options.traffic->loads_i += tally.input;
    options.traffic->loads_f += tally.filter;
    options.traffic->stores_o += tally.output_stores;
    options.traffic->zero_fill_i += tally.zeros;
  } else {
    detail::forward_pass(input, filters, g, options, out, nullptr);
  }
  return out;
}

}  // namespace dwconv
