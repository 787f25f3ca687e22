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

#include "dwconv/tensor.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dwconv/error.h"

namespace dwconv {
namespace {

std::size_t checked_volume(std::initializer_list<int> dims) {
  std::size_t v = 1;
  for (int d : dims) {
    if (d < 0) throw ShapeError("negative tensor dimension");
    v *= static_cast<std::size_t>(d);
  }
  return v;
}

}  // namespace

TensorNCHW::TensorNCHW(int n, int c, int h, int w)
    : n_(n), c_(c), h_(h), w_(w), data_(checked_volume({n, c, h, w}), 0.0f) {}

TensorNCHW::TensorNCHW(int n, int c, int h, int w, std::vector<float> data)
    : n_(n), c_(c), h_(h), w_(w), data_(std::move(data)) {
  if (data_.size() != checked_volume({n, c, h, w})) {
    throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                     " does not match n*c*h*w");
  }
}

Index4 TensorNCHW::unflatten(std::size_t index) const noexcept {
  Index4 ix;
  ix.w = static_cast<int>(index % w_);
  index /= w_;
  ix.h = static_cast<int>(index % h_);
  index /= h_;
  ix.c = static_cast<int>(index % c_);
  ix.n = static_cast<int>(index / c_);
  return ix;
}

FilterSet::FilterSet(int c, int hf, int wf)
    : c_(c), hf_(hf), wf_(wf), data_(checked_volume({c, hf, wf}), 0.0f) {}

FilterSet::FilterSet(int c, int hf, int wf, std::vector<float> data)
    : c_(c), hf_(hf), wf_(wf), data_(std::move(data)) {
  if (data_.size() != checked_volume({c, hf, wf})) {
    throw ShapeError("filter data length " + std::to_string(data_.size()) +
                     " does not match c*hf*wf");
  }
}

double max_relative_error(std::span<const float> x, std::span<const float> ref) {
  if (x.size() != ref.size()) throw ShapeError("size mismatch in comparison");
  double max_diff = 0.0;
  double max_ref = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::abs(static_cast<double>(x[i]) - ref[i]);
    if (!(d <= max_diff)) max_diff = d;  // propagates NaN
    max_ref = std::max(max_ref, std::abs(static_cast<double>(ref[i])));
  }
  return max_ref > 0.0 ? max_diff / max_ref : max_diff;
}

}  // namespace dwconv
