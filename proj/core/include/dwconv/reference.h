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

#include <span>
#include <vector>

#include "dwconv/geometry.h"
#include "dwconv/tensor.h"
#include "dwconv/traffic_counter.h"

// Slow, obviously-correct depthwise convolution. Every sum is accumulated in
// double and rounded to float once at the store. Accepts any filter size and
// stride; out-of-range taps contribute zero.
namespace dwconv::reference {

// O[n,c,ho,wo] = sum_{hf,wf} I[n,c,ho*s+hf-pt, wo*s+wf-pl] * F[c,hf,wf].
// When `traffic` is set, records one input load per in-range tap (loads_i),
// one zero fill per out-of-range tap, Hf*Wf filter loads per (n,c) and one
// store per output.
TensorNCHW forward_naive(const TensorNCHW& input, const FilterSet& filters,
                         const ConvGeometry& geom,
                         MeasuredTraffic* traffic = nullptr);

// dI[n,c,ho*s+hf-pt, wo*s+wf-pl] += dO[n,c,ho,wo] * F[c,hf,wf].
TensorNCHW backward_naive(const TensorNCHW& dout, const FilterSet& filters,
                          const ConvGeometry& geom);

// dF[c,hf,wf] = sum_{n,ho,wo} I[n,c,ho*s+hf-pt, wo*s+wf-pl] * dO[n,c,ho,wo].
FilterSet wgrad_naive(const TensorNCHW& input, const TensorNCHW& dout,
                      const ConvGeometry& geom);

// Lowered (Toeplitz) matrix: per channel an Mm x Nm block with
// Mm = Hf*Wf rows and Nm = N*Ho*Wo columns.
class Im2colMatrix {
 public:
  Im2colMatrix(int c, int mm, int nm);

  int c() const noexcept { return c_; }
  int mm() const noexcept { return mm_; }
  int nm() const noexcept { return nm_; }

  float& at(int c, int row, int col) { return data_[offset(c, row, col)]; }
  float at(int c, int row, int col) const { return data_[offset(c, row, col)]; }
  std::span<const float> data() const noexcept { return data_; }

 private:
  std::size_t offset(int c, int row, int col) const noexcept {
    return (static_cast<std::size_t>(c) * mm_ + row) * nm_ + col;
  }

  int c_;
  int mm_;
  int nm_;
  std::vector<float> data_;
};

// Column (n,ho,wo) of channel c holds the Hf*Wf input taps of that output
// position, zeros for padding.
Im2colMatrix im2col(const TensorNCHW& input, const ConvGeometry& geom);

// Scatter-accumulates every column back into an N x C x Hi x Wi tensor,
// dropping padding taps.
TensorNCHW col2im(const Im2colMatrix& cols, const ConvGeometry& geom);

// Forward through im2col followed by a per-channel (1 x Mm) * (Mm x Nm)
// product.
TensorNCHW forward_gemm_baseline(const TensorNCHW& input,
                                 const FilterSet& filters,
                                 const ConvGeometry& geom);

// dI' = F' (Mm x 1) * dO'^T (1 x Nm) per channel, then col2im.
TensorNCHW backward_gemm_baseline(const TensorNCHW& dout,
                                  const FilterSet& filters,
                                  const ConvGeometry& geom);

// dF column = I' (Mm x Nm) * dO' (Nm x 1) per channel.
FilterSet wgrad_gemm_baseline(const TensorNCHW& input, const TensorNCHW& dout,
                              const ConvGeometry& geom);

}  // namespace dwconv::reference
