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

#include <algorithm>
#include <cstddef>

#include "dwconv/lane_vector.h"
#include "dwconv/traffic_counter.h"

#if defined(__clang__) || defined(__GNUC__)
#define DWCONV_PRAGMA(x) _Pragma(#x)
#define DWCONV_UNROLL DWCONV_PRAGMA(GCC unroll 16)
#else
#define DWCONV_UNROLL
#endif

namespace dwconv::detail {

inline constexpr int VL = kVectorLanes;

struct ConstPlane {
  const float* data;
  int h;
  int w;
  const float* row(int r) const { return data + static_cast<std::ptrdiff_t>(r) * w; }
};

// F[c] of a 3x3 filter with every tap broadcast: tap[hf*3 + q] = F[c,hf,q].
struct FilterTaps {
  LaneVector tap[9];
  float raw[9];
};

// vf rows are 4-lane vectors starting at F[c,hf,0]; lane 3 is never read.
template <class Counter>
inline FilterTaps load_filter_taps(const float* f, Counter& ctr) {
  FilterTaps t;
  DWCONV_UNROLL
  for (int hf = 0; hf < 3; ++hf) {
    alignas(16) float row[VL] = {f[hf * 3], f[hf * 3 + 1], f[hf * 3 + 2], 0.0f};
    const LaneVector vf = LaneVector::load(row);
    t.tap[hf * 3 + 0] = vf.splat<0>();
    t.tap[hf * 3 + 1] = vf.splat<1>();
    t.tap[hf * 3 + 2] = vf.splat<2>();
  }
  std::copy_n(f, 9, t.raw);
  ctr.load_filter(9);
  return t;
}

// Loads `n_vec` vectors covering the `window` elements of `row` starting at
// column x0. Columns outside [0, width) read as zero. Vector loads go straight
// to memory when every loaded lane is in range; otherwise the valid part of
// the window is staged through a zeroed buffer.
template <int kVec, int kWindow, class Counter>
inline void load_window(const float* row, int width, int x0, LaneVector* out,
                        Counter& ctr) {
  static_assert(kVec * VL >= kWindow);
  if (x0 >= 0 && x0 + kVec * VL <= width) {
    DWCONV_UNROLL
    for (int k = 0; k < kVec; ++k) out[k] = LaneVector::load(row + x0 + k * VL);
    ctr.load_input(kWindow);
    return;
  }
  alignas(16) float buf[kVec * VL] = {};
  const int lo = std::max(x0, 0);
  const int hi = std::min(x0 + kWindow, width);
  for (int x = lo; x < hi; ++x) buf[x - x0] = row[x];
  const int valid = std::max(hi - lo, 0);
  ctr.load_input(valid);
  ctr.zero_fill(kWindow - valid);
  DWCONV_UNROLL
  for (int k = 0; k < kVec; ++k) out[k] = LaneVector::load(buf + k * VL);
}

// Window of (WN*VL - 1)*S + 3 input elements starting at wi0, extracted into
// vi[w*3 + q] with lane j = column wi0 + (w*VL + j)*S + q.
template <int S, int WN, class Counter>
inline void extract_row3(const float* row, int width, int wi0, LaneVector* vi,
                         Counter& ctr) {
  static_assert(S == 1 || S == 2);
  constexpr int kWindow = (WN * VL - 1) * S + 3;
  constexpr int kSrc = S == 1 ? WN + 1 : 2 * WN + 1;
  LaneVector src[kSrc];
  load_window<kSrc, kWindow>(row, width, wi0, src, ctr);
  if constexpr (S == 1) {
    DWCONV_UNROLL
    for (int w = 0; w < WN; ++w) {
      vi[w * 3 + 0] = src[w];
      vi[w * 3 + 1] = LaneVector::ext<1>(src[w], src[w + 1]);
      vi[w * 3 + 2] = LaneVector::ext<2>(src[w], src[w + 1]);
    }
  } else {
    LaneVector even[WN + 1];
    DWCONV_UNROLL
    for (int w = 0; w < WN; ++w) {
      even[w] = LaneVector::even(src[2 * w], src[2 * w + 1]);
      vi[w * 3 + 1] = LaneVector::odd(src[2 * w], src[2 * w + 1]);
    }
    even[WN] = LaneVector::even(src[2 * WN], src[2 * WN]);
    DWCONV_UNROLL
    for (int w = 0; w < WN; ++w) {
      vi[w * 3 + 0] = even[w];
      vi[w * 3 + 2] = LaneVector::ext<1>(even[w], even[w + 1]);
    }
  }
}

// HR x (WN*VL) forward tile. Each of the (HR-1)*S + 3 input rows is loaded
// and extracted once, then fed to every output row it contributes to. The
// output vectors stay in registers until the single store at the end.
template <int S, int HR, int WN, class Counter>
void forward_tile(const ConstPlane& in, float* out, int out_w,
                  const FilterTaps& f, int ho0, int wo0, int pt, int pl,
                  Counter& ctr) {
  constexpr int kRows = (HR - 1) * S + 3;
  constexpr int kWindow = (WN * VL - 1) * S + 3;
  LaneVector vo[HR * WN];
  DWCONV_UNROLL
  for (int i = 0; i < HR * WN; ++i) vo[i] = LaneVector::zero();

  const int hi0 = ho0 * S - pt;
  const int wi0 = wo0 * S - pl;
  DWCONV_UNROLL
  for (int r = 0; r < kRows; ++r) {
    const int hi = hi0 + r;
    if (hi < 0 || hi >= in.h) {
      ctr.zero_fill(kWindow);
      continue;
    }
    LaneVector vi[3 * WN];
    extract_row3<S, WN>(in.row(hi), in.w, wi0, vi, ctr);
    DWCONV_UNROLL
    for (int h = 0; h < HR; ++h) {
      const int hf = r - h * S;
      if (hf < 0 || hf >= 3) continue;
      DWCONV_UNROLL
      for (int w = 0; w < WN; ++w) {
        DWCONV_UNROLL
        for (int q = 0; q < 3; ++q) {
          vo[h * WN + w] =
              LaneVector::fma(vo[h * WN + w], vi[w * 3 + q], f.tap[hf * 3 + q]);
        }
      }
    }
  }
  DWCONV_UNROLL
  for (int h = 0; h < HR; ++h) {
    float* dst = out + static_cast<std::ptrdiff_t>(ho0 + h) * out_w + wo0;
    DWCONV_UNROLL
    for (int w = 0; w < WN; ++w) vo[h * WN + w].store(dst + w * VL);
  }
  ctr.store_output(HR * WN * VL);
}

// Scalar edge path: one output element with the same implicit-padding index
// arithmetic and tap order as the tiles.
template <class Counter>
inline float forward_point(const ConstPlane& in, const FilterTaps& f, int ho,
                           int wo, int s, int pt, int pl, Counter& ctr) {
  float acc = 0.0f;
  for (int hf = 0; hf < 3; ++hf) {
    const int hi = ho * s + hf - pt;
    for (int q = 0; q < 3; ++q) {
      const int wi = wo * s + q - pl;
      if (hi < 0 || hi >= in.h || wi < 0 || wi >= in.w) {
        ctr.zero_fill(1);
        continue;
      }
      ctr.load_input(1);
      acc += in.row(hi)[wi] * f.raw[hf * 3 + q];
    }
  }
  return acc;
}

// Stride-2 backward tile of HR x (K*2*VL) dI elements at (hi0, wi0), wi0
// even. Columns split into two parity classes of K vectors each; class e
// covers wi0 + e + 2j. With a0 = wi0 + pl, the odd class takes one dO column
// times F[*,1] and the even class two dO columns times F[*,0] and F[*,2]; the
// same rule picks filter rows per dI row. Each needed dO row is loaded once as
// a window of K*VL + 1 elements.
template <int HR, int K, bool kA0Odd, class Counter>
void backward_s2_tile(const ConstPlane& dout, float* din, int din_w,
                      const FilterTaps& f, int hi0, int wi0, int pt, int pl,
                      Counter& ctr) {
  constexpr int kWindow = K * VL + 1;
  constexpr int kSrc = K + 1;
  // dO rows touching the tile: at most HR/2 + 2.
  constexpr int kMaxRows = HR / 2 + 2;

  LaneVector acc[HR][2][K];
  DWCONV_UNROLL
  for (int h = 0; h < HR; ++h) {
    for (int e = 0; e < 2; ++e) {
      for (int k = 0; k < K; ++k) acc[h][e][k] = LaneVector::zero();
    }
  }

  const int a0 = wi0 + pl;
  const int ws = kA0Odd ? (a0 - 1) / 2 : a0 / 2 - 1;
  // Smallest ho with hi0 + pt - 2*ho <= 2.
  const int t0 = hi0 + pt - 2;
  const int ho_first = t0 >= 0 ? (t0 + 1) / 2 : -((-t0) / 2);
  const int ho_last = (hi0 + HR - 1 + pt) / 2;

  DWCONV_UNROLL
  for (int j = 0; j < kMaxRows; ++j) {
    const int ho = ho_first + j;
    if (ho > ho_last) break;
    if (ho < 0 || ho >= dout.h) {
      ctr.zero_fill(kWindow);
      continue;
    }
    LaneVector src[kSrc];
    load_window<kSrc, kWindow>(dout.row(ho), dout.w, ws, src, ctr);
    LaneVector d0[K];
    LaneVector d1[K];
    DWCONV_UNROLL
    for (int k = 0; k < K; ++k) {
      d0[k] = src[k];
      d1[k] = LaneVector::ext<1>(src[k], src[k + 1]);
    }
    DWCONV_UNROLL
    for (int h = 0; h < HR; ++h) {
      const int hf = hi0 + h + pt - 2 * ho;
      if (hf < 0 || hf >= 3) continue;
      const LaneVector& f0 = f.tap[hf * 3 + 0];
      const LaneVector& f1 = f.tap[hf * 3 + 1];
      const LaneVector& f2 = f.tap[hf * 3 + 2];
      DWCONV_UNROLL
      for (int k = 0; k < K; ++k) {
        if constexpr (kA0Odd) {
          acc[h][0][k] = LaneVector::fma(acc[h][0][k], d0[k], f1);
          acc[h][1][k] = LaneVector::fma(acc[h][1][k], d1[k], f0);
          acc[h][1][k] = LaneVector::fma(acc[h][1][k], d0[k], f2);
        } else {
          acc[h][0][k] = LaneVector::fma(acc[h][0][k], d1[k], f0);
          acc[h][0][k] = LaneVector::fma(acc[h][0][k], d0[k], f2);
          acc[h][1][k] = LaneVector::fma(acc[h][1][k], d1[k], f1);
        }
      }
    }
  }

  // Re-interleave the parity classes: element stride 2 per class.
  DWCONV_UNROLL
  for (int h = 0; h < HR; ++h) {
    float* dst = din + static_cast<std::ptrdiff_t>(hi0 + h) * din_w + wi0;
    DWCONV_UNROLL
    for (int k = 0; k < K; ++k) {
      LaneVector::zip_lo(acc[h][0][k], acc[h][1][k]).store(dst + k * 2 * VL);
      LaneVector::zip_hi(acc[h][0][k], acc[h][1][k]).store(dst + k * 2 * VL + VL);
    }
  }
  ctr.store_output(HR * K * 2 * VL);
}

// Scalar stride-2 backward element: gathers the taps whose parity matches.
template <class Counter>
inline float backward_s2_point(const ConstPlane& dout, const FilterTaps& f,
                               int hi, int wi, int pt, int pl, Counter& ctr) {
  float acc = 0.0f;
  for (int hf = 0; hf < 3; ++hf) {
    const int th = hi + pt - hf;
    if (th < 0 || (th & 1)) continue;
    const int ho = th / 2;
    for (int q = 0; q < 3; ++q) {
      const int tw = wi + pl - q;
      if (tw < 0 || (tw & 1)) continue;
      const int wo = tw / 2;
      if (ho >= dout.h || wo >= dout.w) {
        ctr.zero_fill(1);
        continue;
      }
      ctr.load_input(1);
      acc += dout.row(ho)[wo] * f.raw[hf * 3 + q];
    }
  }
  return acc;
}

// Weight-gradient tile: HR x WR block of dO at (ho0, wo0). The block is
// loaded once and kept while the (HR-1)*S + 3 input rows stream past. Each
// row window is extracted into WR vectors whose lanes 0..2 hold the three
// taps of one output column (lane 3 cleared), accumulated into acc[hf].
template <int S, int HR, int WR, class Counter>
void wgrad_tile(const ConstPlane& in, const ConstPlane& dout, int ho0, int wo0,
                int pt, int pl, LaneVector* acc, Counter& ctr) {
  constexpr int kRows = (HR - 1) * S + 3;
  constexpr int kWindow = (WR - 1) * S + 3;
  constexpr int kSpan = (WR - 1) * S + VL;

  LaneVector dv[HR][WR];
  DWCONV_UNROLL
  for (int h = 0; h < HR; ++h) {
    const float* drow = dout.row(ho0 + h) + wo0;
    if constexpr (WR % VL == 0) {
      DWCONV_UNROLL
      for (int k = 0; k < WR / VL; ++k) {
        const LaneVector v = LaneVector::load(drow + k * VL);
        dv[h][k * VL + 0] = v.splat<0>();
        dv[h][k * VL + 1] = v.splat<1>();
        dv[h][k * VL + 2] = v.splat<2>();
        dv[h][k * VL + 3] = v.splat<3>();
      }
    } else {
      DWCONV_UNROLL
      for (int w = 0; w < WR; ++w) dv[h][w] = LaneVector::broadcast(drow[w]);
    }
  }
  ctr.load_output(HR * WR);

  const int hi0 = ho0 * S - pt;
  const int wi0 = wo0 * S - pl;
  DWCONV_UNROLL
  for (int r = 0; r < kRows; ++r) {
    const int hi = hi0 + r;
    if (hi < 0 || hi >= in.h) {
      ctr.zero_fill(kWindow);
      continue;
    }
    const float* row = in.row(hi);
    alignas(16) float buf[kSpan] = {};
    const float* base = buf;
    if (wi0 >= 0 && wi0 + kSpan <= in.w) {
      base = row + wi0;
      ctr.load_input(kWindow);
    } else {
      const int lo = std::max(wi0, 0);
      const int hi_col = std::min(wi0 + kWindow, in.w);
      for (int x = lo; x < hi_col; ++x) buf[x - wi0] = row[x];
      const int valid = std::max(hi_col - lo, 0);
      ctr.load_input(valid);
      ctr.zero_fill(kWindow - valid);
    }
    LaneVector vi[WR];
    DWCONV_UNROLL
    for (int w = 0; w < WR; ++w) {
      vi[w] = LaneVector::load(base + w * S).template keep_first<3>();
    }
    DWCONV_UNROLL
    for (int h = 0; h < HR; ++h) {
      const int hf = r - h * S;
      if (hf < 0 || hf >= 3) continue;
      DWCONV_UNROLL
      for (int w = 0; w < WR; ++w) acc[hf] = LaneVector::fma(acc[hf], vi[w], dv[h][w]);
    }
  }
}

}  // namespace dwconv::detail
