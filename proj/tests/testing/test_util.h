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
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dwconv/geometry.h"
#include "dwconv/tensor.h"
#include "dwconv/tile.h"

namespace dwconv::testing {

inline void fill_uniform(std::span<float> data, std::mt19937& rng,
                         float lo = -1.0f, float hi = 1.0f) {
  std::uniform_real_distribution<float> dist(lo, hi);
  for (float& x : data) x = dist(rng);
}

inline TensorNCHW random_tensor(int n, int c, int h, int w, std::mt19937& rng) {
  TensorNCHW t(n, c, h, w);
  fill_uniform(t.data(), rng);
  return t;
}

inline FilterSet random_filters(int c, int hf, int wf, std::mt19937& rng) {
  FilterSet f(c, hf, wf);
  fill_uniform(f.data(), rng);
  return f;
}

inline TensorNCHW random_input(const ConvGeometry& g, std::mt19937& rng) {
  return random_tensor(g.n(), g.c(), g.hi(), g.wi(), rng);
}

inline TensorNCHW random_dout(const ConvGeometry& g, std::mt19937& rng) {
  return random_tensor(g.n(), g.c(), g.ho(), g.wo(), rng);
}

// Randomized direct-kernel geometry: 3x3 filter, H_i, W_i in [lo, hi],
// s in {1,2}, each padding in {0,1}, C in 1..8, N in 1..3.
inline ConvGeometry random_direct_geometry(std::mt19937& rng, int lo = 3,
                                           int hi = 40) {
  std::uniform_int_distribution<int> extent(lo, hi);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<int> chan(1, 8);
  std::uniform_int_distribution<int> batch(1, 3);
  ConvParams p;
  p.n = batch(rng);
  p.c = chan(rng);
  p.hi = extent(rng);
  p.wi = extent(rng);
  p.stride = 1 + bit(rng);
  p.pt = bit(rng);
  p.pb = bit(rng);
  p.pl = bit(rng);
  p.pr = bit(rng);
  return ConvGeometry(p);
}

// Generic oracle geometry: H_i, W_i in 1..16, H_f, W_f in 1..5, stride 1..2,
// paddings 0..2 (clamped below the filter extent). Retries until valid.
inline ConvGeometry random_generic_geometry(std::mt19937& rng) {
  std::uniform_int_distribution<int> extent(1, 16);
  std::uniform_int_distribution<int> fext(1, 5);
  std::uniform_int_distribution<int> pad(0, 2);
  std::uniform_int_distribution<int> stride(1, 2);
  std::uniform_int_distribution<int> small(1, 3);
  for (;;) {
    ConvParams p;
    p.n = small(rng);
    p.c = small(rng);
    p.hi = extent(rng);
    p.wi = extent(rng);
    p.hf = fext(rng);
    p.wf = fext(rng);
    p.stride = stride(rng);
    p.pt = std::min(pad(rng), p.hf - 1);
    p.pb = std::min(pad(rng), p.hf - 1);
    p.pl = std::min(pad(rng), p.wf - 1);
    p.pr = std::min(pad(rng), p.wf - 1);
    if (p.hi + p.pt + p.pb < p.hf || p.wi + p.pl + p.pr < p.wf) continue;
    return ConvGeometry(p);
  }
}

inline double dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

// L = <dO, conv(I, F)> evaluated entirely in double, without rounding the
// convolution output to float. Used as the finite-difference objective.
inline double forward_loss_double(const TensorNCHW& in, const FilterSet& f,
                                  const TensorNCHW& dout, const ConvGeometry& g) {
  double loss = 0.0;
  for (int n = 0; n < g.n(); ++n)
    for (int c = 0; c < g.c(); ++c)
      for (int ho = 0; ho < g.ho(); ++ho)
        for (int wo = 0; wo < g.wo(); ++wo) {
          double acc = 0.0;
          for (int hf = 0; hf < g.hf(); ++hf)
            for (int wf = 0; wf < g.wf(); ++wf) {
              const int hi = ho * g.stride() + hf - g.pt();
              const int wi = wo * g.stride() + wf - g.pl();
              if (hi < 0 || hi >= g.hi() || wi < 0 || wi >= g.wi()) continue;
              acc += static_cast<double>(in.at(n, c, hi, wi)) * f.at(c, hf, wf);
            }
          loss += acc * dout.at(n, c, ho, wo);
        }
  return loss;
}

// Owner count per output element of a schedule: 1 everywhere iff the
// schedule partitions the output.
inline std::vector<int> coverage_map(const TileSchedule& s) {
  std::vector<int> owners(static_cast<std::size_t>(s.height) * s.width, 0);
  auto mark = [&](int h, int w) {
    if (h < 0 || h >= s.height || w < 0 || w >= s.width) {
      owners.push_back(-1);  // out-of-bounds write marker
      return;
    }
    ++owners[static_cast<std::size_t>(h) * s.width + w];
  };
  for (const TileBand& band : s.bands) {
    for (const TileSpan& span : band.spans) {
      for (int t = 0; t < span.count; ++t) {
        for (int h = 0; h < band.rows; ++h) {
          for (int w = 0; w < span.wr; ++w) {
            mark(band.ho0 + h, span.wo0 + t * span.wr + w);
          }
        }
      }
    }
    for (int h = 0; h < band.rows; ++h) {
      for (int w = band.scalar_wo0; w < s.width; ++w) mark(band.ho0 + h, w);
    }
  }
  return owners;
}

inline bool partitions(const TileSchedule& s) {
  const auto owners = coverage_map(s);
  if (owners.size() != static_cast<std::size_t>(s.height) * s.width) return false;
  for (int o : owners) {
    if (o != 1) return false;
  }
  return true;
}

}  // namespace dwconv::testing
