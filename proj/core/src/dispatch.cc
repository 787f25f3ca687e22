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

#include <iostream>

#include "dwconv/dwconv.h"

namespace dwconv {
namespace {

void notice(const char* pass, const ConvGeometry& g) {
  std::clog << "dwconv: no direct " << pass << " kernel for " << g.to_string()
            << "; using the reference implementation\n";
}

}  // namespace

TensorNCHW forward(const TensorNCHW& input, const FilterSet& filters,
                   const ConvGeometry& geom, const PassOptions& options) {
  if (forward_direct_supported(geom)) {
    return forward_direct(input, filters, geom, options);
  }
  notice("forward", geom);
  return reference::forward_naive(input, filters, geom);
}

TensorNCHW backward(const TensorNCHW& dout, const FilterSet& filters,
                    const ConvGeometry& geom, const PassOptions& options) {
  if (backward_direct_supported(geom)) {
    return backward_direct(dout, filters, geom, options);
  }
  notice("backward", geom);
  return reference::backward_naive(dout, filters, geom);
}

FilterSet weight_gradient(const TensorNCHW& input, const TensorNCHW& dout,
                          const ConvGeometry& geom, const PassOptions& options) {
  if (wgrad_direct_supported(geom)) {
    return wgrad_direct(input, dout, geom, options);
  }
  notice("weight-gradient", geom);
  return reference::wgrad_naive(input, dout, geom);
}

}  // namespace dwconv
