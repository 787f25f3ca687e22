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

#include "dwconv/forward.h"
#include "dwconv/geometry.h"
#include "dwconv/tensor.h"

namespace dwconv {

// F'[c,hf,wf] = F[c, Hf-1-hf, Wf-1-wf].
class RotatedFilterSet {
 public:
  explicit RotatedFilterSet(FilterSet rotated) : filters_(std::move(rotated)) {}
  const FilterSet& filters() const noexcept { return filters_; }

 private:
  FilterSet filters_;
};

RotatedFilterSet rotate_filter_180(const FilterSet& filters);
FilterSet rotate_filter_180(const RotatedFilterSet& rotated);

// Geometry of the stride-1 backward pass seen as a forward convolution:
// dO is the input (Ho x Wo), dI the output (Hi x Wi), paddings Hf-1-p.
ConvGeometry backward_as_forward_geometry(const ConvGeometry& geom);

bool backward_direct_supported(const ConvGeometry& geom);

// Stride 1: forward_direct(dO, rotate_filter_180(F)) on the transposed
// geometry.
TensorNCHW backward_direct_s1(const TensorNCHW& dout, const FilterSet& filters,
                              const ConvGeometry& geom,
                              const PassOptions& options = {});

// Stride 2: parity-split kernel tiled over dI. Default tile 6x8; tile width
// must be a multiple of 2*vl and height in 1..6.
TensorNCHW backward_direct_s2(const TensorNCHW& dout, const FilterSet& filters,
                              const ConvGeometry& geom,
                              const PassOptions& options = {});

// Dispatches on stride.
TensorNCHW backward_direct(const TensorNCHW& dout, const FilterSet& filters,
                           const ConvGeometry& geom,
                           const PassOptions& options = {});

// The (filter row, filter column) taps that reach dI[hi][wi] under stride 2:
// hf with (hi + pt - hf) even and 0 <= (hi + pt - hf)/2 < Ho, likewise for
// columns. Exposed for the parity-partition property tests.
struct ParityTaps {
  int rows[3];
  int row_count = 0;
  int cols[3];
  int col_count = 0;
};
ParityTaps stride2_taps(const ConvGeometry& geom, int hi, int wi);

}  // namespace dwconv
