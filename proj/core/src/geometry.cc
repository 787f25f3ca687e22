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

#include "dwconv/geometry.h"

#include <sstream>

#include "dwconv/error.h"

namespace dwconv {
namespace {

int extent(int in, int before, int after, int f, int s) {
  const int span = in + before + after - f;
  if (span < 0) return 0;
  return span / s + 1;
}

}  // namespace

OutputShape output_shape(int hi, int wi, int hf, int wf, int stride, int pt,
                         int pb, int pl, int pr) {
  if (stride < 1) throw ShapeError("stride must be >= 1");
  if (hf < 1 || wf < 1) throw ShapeError("filter dimensions must be >= 1");
  if (pt < 0 || pb < 0 || pl < 0 || pr < 0) {
    throw ShapeError("padding must be non-negative");
  }
  const OutputShape out{extent(hi, pt, pb, hf, stride),
                        extent(wi, pl, pr, wf, stride)};
  if (out.ho < 1 || out.wo < 1) {
    throw ShapeError("filter does not fit the padded input");
  }
  return out;
}

ConvGeometry::ConvGeometry(const ConvParams& p) : p_(p) {
  if (p.n < 1 || p.c < 1) throw ShapeError("batch and channels must be >= 1");
  if (p.hi < 1 || p.wi < 1) throw ShapeError("input extent must be >= 1");
  out_ = output_shape(p.hi, p.wi, p.hf, p.wf, p.stride, p.pt, p.pb, p.pl, p.pr);
  if (p.pt >= p.hf || p.pb >= p.hf || p.pl >= p.wf || p.pr >= p.wf) {
    throw ShapeError("padding must be smaller than the filter extent");
  }
}

ConvGeometry ConvGeometry::make(int n, int c, int hi, int wi, int stride,
                                int pad, int hf, int wf) {
  return ConvGeometry(ConvParams{n, c, hi, wi, hf, wf, stride, pad, pad, pad, pad});
}

ConvGeometry ConvGeometry::with_batch(int n) const {
  ConvParams p = p_;
  p.n = n;
  return ConvGeometry(p);
}

double ConvGeometry::flops() const noexcept {
  return 2.0 * p_.n * p_.c * out_.ho * out_.wo * p_.hf * p_.wf;
}

std::string ConvGeometry::to_string() const {
  std::ostringstream os;
  os << "N=" << p_.n << " C=" << p_.c << " in=" << p_.hi << 'x' << p_.wi
     << " f=" << p_.hf << 'x' << p_.wf << " s=" << p_.stride << " pad=("
     << p_.pt << ',' << p_.pb << ',' << p_.pl << ',' << p_.pr << ") out="
     << out_.ho << 'x' << out_.wo;
  return os.str();
}

}  // namespace dwconv
