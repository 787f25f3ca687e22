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
#include <cstddef>

#if !defined(DWCONV_SCALAR_LANES)
#if defined(__SSE2__) || defined(_M_X64)
#include <immintrin.h>
#define DWCONV_LANES_SSE 1
#elif defined(__ARM_NEON)
#include <arm_neon.h>
#define DWCONV_LANES_NEON 1
#endif
#endif

namespace dwconv {

// Lanes per vector: the 128-bit single-precision case.
inline constexpr int kVectorLanes = 4;

// Four single-precision lanes. Kernels are written only against this type so
// the same tiling code runs on SSE, NEON, or the scalar emulation.
class LaneVector {
 public:
#if defined(DWCONV_LANES_SSE)
  using Native = __m128;
#elif defined(DWCONV_LANES_NEON)
  using Native = float32x4_t;
#else
  using Native = std::array<float, kVectorLanes>;
#endif

  LaneVector() = default;
  explicit LaneVector(Native v) : v_(v) {}

  static LaneVector zero() {
#if defined(DWCONV_LANES_SSE)
    return LaneVector(_mm_setzero_ps());
#elif defined(DWCONV_LANES_NEON)
    return LaneVector(vdupq_n_f32(0.0f));
#else
    return LaneVector(Native{0.0f, 0.0f, 0.0f, 0.0f});
#endif
  }

  static LaneVector broadcast(float x) {
#if defined(DWCONV_LANES_SSE)
    return LaneVector(_mm_set1_ps(x));
#elif defined(DWCONV_LANES_NEON)
    return LaneVector(vdupq_n_f32(x));
#else
    return LaneVector(Native{x, x, x, x});
#endif
  }

  static LaneVector of(float a, float b, float c, float d) {
#if defined(DWCONV_LANES_SSE)
    return LaneVector(_mm_setr_ps(a, b, c, d));
#elif defined(DWCONV_LANES_NEON)
    const float tmp[4] = {a, b, c, d};
    return LaneVector(vld1q_f32(tmp));
#else
    return LaneVector(Native{a, b, c, d});
#endif
  }

  // Unaligned load/store of four consecutive floats.
  static LaneVector load(const float* p) {
#if defined(DWCONV_LANES_SSE)
    return LaneVector(_mm_loadu_ps(p));
#elif defined(DWCONV_LANES_NEON)
    return LaneVector(vld1q_f32(p));
#else
    return LaneVector(Native{p[0], p[1], p[2], p[3]});
#endif
  }

  void store(float* p) const {
#if defined(DWCONV_LANES_SSE)
    _mm_storeu_ps(p, v_);
#elif defined(DWCONV_LANES_NEON)
    vst1q_f32(p, v_);
#else
    for (int i = 0; i < kVectorLanes; ++i) p[i] = v_[i];
#endif
  }

  std::array<float, kVectorLanes> to_array() const {
    std::array<float, kVectorLanes> out;
    store(out.data());
    return out;
  }

  float lane(int i) const { return to_array()[i]; }

  Native native() const { return v_; }

  // Every lane set to lane Q.
  template <int Q>
  LaneVector splat() const {
    static_assert(Q >= 0 && Q < kVectorLanes);
#if defined(DWCONV_LANES_SSE)
    return LaneVector(_mm_shuffle_ps(v_, v_, _MM_SHUFFLE(Q, Q, Q, Q)));
#elif defined(DWCONV_LANES_NEON)
    return LaneVector(vdupq_laneq_f32(v_, Q));
#else
    return broadcast(v_[Q]);
#endif
  }

  // acc + a * b, lane-wise. Fused when the target has FMA.
  static LaneVector fma(LaneVector acc, LaneVector a, LaneVector b) {
#if defined(DWCONV_LANES_SSE) && defined(__FMA__)
    return LaneVector(_mm_fmadd_ps(a.v_, b.v_, acc.v_));
#elif defined(DWCONV_LANES_SSE)
    return LaneVector(_mm_add_ps(acc.v_, _mm_mul_ps(a.v_, b.v_)));
#elif defined(DWCONV_LANES_NEON)
    return LaneVector(vfmaq_f32(acc.v_, a.v_, b.v_));
#else
    Native r;
    for (int i = 0; i < kVectorLanes; ++i) r[i] = acc.v_[i] + a.v_[i] * b.v_[i];
    return LaneVector(r);
#endif
  }

  // Lanes K..K+3 of the concatenation [a, b] (NEON ext / SSSE3 alignr).
  template <int K>
  static LaneVector ext(LaneVector a, LaneVector b) {
    static_assert(K >= 0 && K < kVectorLanes);
    if constexpr (K == 0) {
      return a;
    } else {
#if defined(DWCONV_LANES_SSE)
      if constexpr (K == 1) {
        const __m128 t = _mm_shuffle_ps(a.v_, b.v_, _MM_SHUFFLE(0, 0, 3, 3));
        return LaneVector(_mm_shuffle_ps(a.v_, t, _MM_SHUFFLE(2, 0, 2, 1)));
      } else if constexpr (K == 2) {
        return LaneVector(_mm_shuffle_ps(a.v_, b.v_, _MM_SHUFFLE(1, 0, 3, 2)));
      } else {
        const __m128 t = _mm_shuffle_ps(a.v_, b.v_, _MM_SHUFFLE(1, 0, 3, 3));
        return LaneVector(_mm_shuffle_ps(t, b.v_, _MM_SHUFFLE(2, 1, 2, 0)));
      }
#elif defined(DWCONV_LANES_NEON)
      return LaneVector(vextq_f32(a.v_, b.v_, K));
#else
      Native r;
      for (int i = 0; i < kVectorLanes; ++i) {
        const int j = i + K;
        r[i] = j < kVectorLanes ? a.v_[j] : b.v_[j - kVectorLanes];
      }
      return LaneVector(r);
#endif
    }
  }

  // Even / odd lanes of [a, b]: the stride-2 de-interleave.
  static LaneVector even(LaneVector a, LaneVector b) {
#if defined(DWCONV_LANES_SSE)
    return LaneVector(_mm_shuffle_ps(a.v_, b.v_, _MM_SHUFFLE(2, 0, 2, 0)));
#elif defined(DWCONV_LANES_NEON)
    return LaneVector(vuzp1q_f32(a.v_, b.v_));
#else
    return LaneVector(Native{a.v_[0], a.v_[2], b.v_[0], b.v_[2]});
#endif
  }

  static LaneVector odd(LaneVector a, LaneVector b) {
#if defined(DWCONV_LANES_SSE)
    return LaneVector(_mm_shuffle_ps(a.v_, b.v_, _MM_SHUFFLE(3, 1, 3, 1)));
#elif defined(DWCONV_LANES_NEON)
    return LaneVector(vuzp2q_f32(a.v_, b.v_));
#else
    return LaneVector(Native{a.v_[1], a.v_[3], b.v_[1], b.v_[3]});
#endif
  }

  // Interleave: zip_lo = [a0,b0,a1,b1], zip_hi = [a2,b2,a3,b3].
  static LaneVector zip_lo(LaneVector a, LaneVector b) {
#if defined(DWCONV_LANES_SSE)
    return LaneVector(_mm_unpacklo_ps(a.v_, b.v_));
#elif defined(DWCONV_LANES_NEON)
    return LaneVector(vzip1q_f32(a.v_, b.v_));
#else
    return LaneVector(Native{a.v_[0], b.v_[0], a.v_[1], b.v_[1]});
#endif
  }

  static LaneVector zip_hi(LaneVector a, LaneVector b) {
#if defined(DWCONV_LANES_SSE)
    return LaneVector(_mm_unpackhi_ps(a.v_, b.v_));
#elif defined(DWCONV_LANES_NEON)
    return LaneVector(vzip2q_f32(a.v_, b.v_));
#else
    return LaneVector(Native{a.v_[2], b.v_[2], a.v_[3], b.v_[3]});
#endif
  }

  // Lanes >= K cleared to 0.0.
  template <int K>
  LaneVector keep_first() const {
    static_assert(K >= 0 && K <= kVectorLanes);
#if defined(DWCONV_LANES_SSE)
    const __m128 mask = _mm_castsi128_ps(_mm_setr_epi32(
        K > 0 ? -1 : 0, K > 1 ? -1 : 0, K > 2 ? -1 : 0, K > 3 ? -1 : 0));
    return LaneVector(_mm_and_ps(v_, mask));
#elif defined(DWCONV_LANES_NEON)
    const uint32_t m[4] = {K > 0 ? ~0u : 0u, K > 1 ? ~0u : 0u,
                           K > 2 ? ~0u : 0u, K > 3 ? ~0u : 0u};
    return LaneVector(vreinterpretq_f32_u32(
        vandq_u32(vreinterpretq_u32_f32(v_), vld1q_u32(m))));
#else
    Native r = v_;
    for (int i = K; i < kVectorLanes; ++i) r[i] = 0.0f;
    return LaneVector(r);
#endif
  }

  // Name of the active backend, for logs and benchmark labels.
  static const char* backend() {
#if defined(DWCONV_LANES_SSE)
    return "sse";
#elif defined(DWCONV_LANES_NEON)
    return "neon";
#else
    return "scalar";
#endif
  }

 private:
  Native v_;
};

}  // namespace dwconv
