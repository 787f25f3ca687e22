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

#include <string>

namespace dwconv {

struct OutputShape {
  int ho = 0;
  int wo = 0;

  friend bool operator==(const OutputShape&, const OutputShape&) = default;
};

// Output extent of a strided, padded window: floor((in + pads - f) / s) + 1
// per dimension. Throws ShapeError when either dimension would be < 1.
OutputShape output_shape(int hi, int wi, int hf, int wf, int stride, int pt,
                         int pb, int pl, int pr);

// Constructor arguments for ConvGeometry. Filters default to 3x3 with
// "same" padding of 1 on every side.
struct ConvParams {
  int n = 1;
  int c = 1;
  int hi = 1;
  int wi = 1;
  int hf = 3;
  int wf = 3;
  int stride = 1;
  int pt = 1;
  int pb = 1;
  int pl = 1;
  int pr = 1;
};

// Validated shape/stride/padding descriptor for one depthwise layer.
// Immutable after construction.
class ConvGeometry {
 public:
  explicit ConvGeometry(const ConvParams& p);

  // Symmetric padding shorthand.
  static ConvGeometry make(int n, int c, int hi, int wi, int stride,
                           int pad = 1, int hf = 3, int wf = 3);

  int n() const noexcept { return p_.n; }
  int c() const noexcept { return p_.c; }
  int hi() const noexcept { return p_.hi; }
  int wi() const noexcept { return p_.wi; }
  int hf() const noexcept { return p_.hf; }
  int wf() const noexcept { return p_.wf; }
  int stride() const noexcept { return p_.stride; }
  int pt() const noexcept { return p_.pt; }
  int pb() const noexcept { return p_.pb; }
  int pl() const noexcept { return p_.pl; }
  int pr() const noexcept { return p_.pr; }
  int ho() const noexcept { return out_.ho; }
  int wo() const noexcept { return out_.wo; }
  const ConvParams& params() const noexcept { return p_; }

  // Same layer with a different mini-batch size.
  ConvGeometry with_batch(int n) const;

  // Multiply-add count times two: 2*N*C*Ho*Wo*Hf*Wf.
  double flops() const noexcept;

  std::string to_string() const;

  friend bool operator==(const ConvGeometry& a, const ConvGeometry& b) {
    return a.to_string() == b.to_string();
  }

 private:
  ConvParams p_;
  OutputShape out_;
};

}  // namespace dwconv
