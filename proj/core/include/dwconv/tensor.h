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
#include <cstdint>
#include <span>
#include <vector>

namespace dwconv {

struct Index4 {
  int n = 0;
  int c = 0;
  int h = 0;
  int w = 0;

  friend bool operator==(const Index4&, const Index4&) = default;
};

// Dense single-precision tensor in NCHW order. Element (n,c,h,w) lives at
// ((n*C + c)*H + h)*W + w.
class TensorNCHW {
 public:
  TensorNCHW() = default;
  TensorNCHW(int n, int c, int h, int w);
  TensorNCHW(int n, int c, int h, int w, std::vector<float> data);

  int n() const noexcept { return n_; }
  int c() const noexcept { return c_; }
  int h() const noexcept { return h_; }
  int w() const noexcept { return w_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t flatten(int n, int c, int h, int w) const noexcept {
    return ((static_cast<std::size_t>(n) * c_ + c) * h_ + h) * w_ + w;
  }
  Index4 unflatten(std::size_t index) const noexcept;

  float& at(int n, int c, int h, int w) { return data_[flatten(n, c, h, w)]; }
  float at(int n, int c, int h, int w) const {
    return data_[flatten(n, c, h, w)];
  }

  // One H x W plane.
  float* plane(int n, int c) noexcept { return data_.data() + flatten(n, c, 0, 0); }
  const float* plane(int n, int c) const noexcept {
    return data_.data() + flatten(n, c, 0, 0);
  }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  bool same_shape(const TensorNCHW& other) const noexcept {
    return n_ == other.n_ && c_ == other.c_ && h_ == other.h_ && w_ == other.w_;
  }

 private:
  int n_ = 0;
  int c_ = 0;
  int h_ = 0;
  int w_ = 0;
  std::vector<float> data_;
};

// Per-channel filters F[C][Hf][Wf] (also used for dF).
class FilterSet {
 public:
  FilterSet() = default;
  FilterSet(int c, int hf, int wf);
  FilterSet(int c, int hf, int wf, std::vector<float> data);

  int c() const noexcept { return c_; }
  int hf() const noexcept { return hf_; }
  int wf() const noexcept { return wf_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t flatten(int c, int h, int w) const noexcept {
    return (static_cast<std::size_t>(c) * hf_ + h) * wf_ + w;
  }
  float& at(int c, int h, int w) { return data_[flatten(c, h, w)]; }
  float at(int c, int h, int w) const { return data_[flatten(c, h, w)]; }

  const float* channel(int c) const noexcept {
    return data_.data() + flatten(c, 0, 0);
  }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

 private:
  int c_ = 0;
  int hf_ = 0;
  int wf_ = 0;
  std::vector<float> data_;
};

// max_i |x_i - ref_i| / max_i |ref_i|. Returns the absolute error when the
// reference is identically zero. Throws ShapeError on a size mismatch.
double max_relative_error(std::span<const float> x, std::span<const float> ref);

}  // namespace dwconv
