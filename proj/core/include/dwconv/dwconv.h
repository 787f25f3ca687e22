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

#include "dwconv/analysis.h"
#include "dwconv/backward.h"
#include "dwconv/error.h"
#include "dwconv/forward.h"
#include "dwconv/geometry.h"
#include "dwconv/lane_vector.h"
#include "dwconv/layer_suite.h"
#include "dwconv/parallel.h"
#include "dwconv/reference.h"
#include "dwconv/tensor.h"
#include "dwconv/tile.h"
#include "dwconv/wgrad.h"

namespace dwconv {

// Direct kernels where supported, otherwise the reference implementation
// (with a notice on std::clog).
TensorNCHW forward(const TensorNCHW& input, const FilterSet& filters,
                   const ConvGeometry& geom, const PassOptions& options = {});
TensorNCHW backward(const TensorNCHW& dout, const FilterSet& filters,
                    const ConvGeometry& geom, const PassOptions& options = {});
FilterSet weight_gradient(const TensorNCHW& input, const TensorNCHW& dout,
                          const ConvGeometry& geom,
                          const PassOptions& options = {});

}  // namespace dwconv
