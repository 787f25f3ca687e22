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

#include "dwconv/reference.h"

#include <string>
#include <vector>

#include "dwconv/error.h"

namespace dwconv::reference {
namespace {

void check_input(const TensorNCHW& t, const ConvGeometry& g) {
  if (t.n() != g.n() || t.c() != g.c() || t.h() != g.hi() || t.w() != g.wi()) {
    throw ShapeError("input shape does not match geometry " + g.to_string());
  }
}

void check_output(const TensorNCHW& t, const ConvGeometry& g) {
  if (t.n() != g.n() || t.c() != g.c() || t.h() != g.ho() || t.w() != g.wo()) {
    throw ShapeError("output-gradient shape does not match geometry " +
                     g.to_string());
  }
}

void check_filters(const FilterSet& f, const ConvGeometry& g) {
  if (f.c() != g.c() || f.hf() != g.hf() || f.wf() != g.wf()) {
    throw ShapeError("filter shape does not match geometry " + g.to_string());
  }
}

bool in_range(int v, int extent) { return v >= 0 && v < extent; }

// C = A * B with A (m x k), B (k x n), row-major, double accumulation.
void matmul(int m, int n, int k, const float* a, const float* b, float* c) {
  std::vector<double> row(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    for (int p = 0; p < k; ++p) {
      const double aip = a[static_cast<std::size_t>(i) * k + p];
      const float* brow = b + static_cast<std::size_t>(p) * n;
      for (int j = 0; j < n; ++j) row[j] += aip * brow[j];
    }
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(i) * n + j] =
        static_cast<float>(row[j]);
  }
}

}  // namespace

TensorNCHW forward_naive(const TensorNCHW& input, const FilterSet& filters,
                         const ConvGeometry& g, MeasuredTraffic* traffic) {
  check_input(input, g);
  check_filters(filters, g);
  TensorNCHW out(g.n(), g.c(), g.ho(), g.wo());
  MeasuredTraffic t;
  for (int n = 0; n < g.n(); ++n) {
    for (int c = 0; c < g.c(); ++c) {
      t.loads_f += static_cast<std::int64_t>(g.hf()) * g.wf();
      for (int ho = 0; ho < g.ho(); ++ho) {
        for (int wo = 0; wo < g.wo(); ++wo) {
          double acc = 0.0;
          for (int hf = 0; hf < g.hf(); ++hf) {
            const int hi = ho * g.stride() + hf - g.pt();
            for (int wf = 0; wf < g.wf(); ++wf) {
              const int wi = wo * g.stride() + wf - g.pl();
              if (!in_range(hi, g.hi()) || !in_range(wi, g.wi())) {
                ++t.zero_fill_i;
                continue;
              }
              ++t.loads_i;
              acc += static_cast<double>(input.at(n, c, hi, wi)) *
                     filters.at(c, hf, wf);
            }
          }
          out.at(n, c, ho, wo) = static_cast<float>(acc);
          ++t.stores_o;
        }
      }
    }
  }
  if (traffic) *traffic += t;
  return out;
}

TensorNCHW backward_naive(const TensorNCHW& dout, const FilterSet& filters,
                          const ConvGeometry& g) {
  check_output(dout, g);
  check_filters(filters, g);
  const std::size_t plane = static_cast<std::size_t>(g.hi()) * g.wi();
  std::vector<double> acc(plane);
  TensorNCHW din(g.n(), g.c(), g.hi(), g.wi());
  for (int n = 0; n < g.n(); ++n) {
    for (int c = 0; c < g.c(); ++c) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int ho = 0; ho < g.ho(); ++ho) {
        for (int wo = 0; wo < g.wo(); ++wo) {
          const double d = dout.at(n, c, ho, wo);
          for (int hf = 0; hf < g.hf(); ++hf) {
            const int hi = ho * g.stride() + hf - g.pt();
            if (!in_range(hi, g.hi())) continue;
            for (int wf = 0; wf < g.wf(); ++wf) {
              const int wi = wo * g.stride() + wf - g.pl();
              if (!in_range(wi, g.wi())) continue;
              acc[static_cast<std::size_t>(hi) * g.wi() + wi] +=
                  d * filters.at(c, hf, wf);
            }
          }
        }
      }
      float* dst = din.plane(n, c);
      for (std::size_t i = 0; i < plane; ++i) dst[i] = static_cast<float>(acc[i]);
    }
  }
  return din;
}

FilterSet wgrad_naive(const TensorNCHW& input, const TensorNCHW& dout,
                      const ConvGeometry& g) {
  check_input(input, g);
  check_output(dout, g);
  FilterSet df(g.c(), g.hf(), g.wf());
  for (int c = 0; c < g.c(); ++c) {
    for (int hf = 0; hf < g.hf(); ++hf) {
      for (int wf = 0; wf < g.wf(); ++wf) {
        double acc = 0.0;
        for (int n = 0; n < g.n(); ++n) {
          for (int ho = 0; ho < g.ho(); ++ho) {
            const int hi = ho * g.stride() + hf - g.pt();
            if (!in_range(hi, g.hi())) continue;
            for (int wo = 0; wo < g.wo(); ++wo) {
              const int wi = wo * g.stride() + wf - g.pl();
              if (!in_range(wi, g.wi())) continue;
              acc += static_cast<double>(input.at(n, c, hi, wi)) *
                     dout.at(n, c, ho, wo);
            }
          }
        }
        df.at(c, hf, wf) = static_cast<float>(acc);
      }
    }
  }
  return df;
}

Im2colMatrix::Im2colMatrix(int c, int mm, int nm)
    : c_(c),
      mm_(mm),
      nm_(nm),
      data_(static_cast<std::size_t>(c) * mm * nm, 0.0f) {}

Im2colMatrix im2col(const TensorNCHW& input, const ConvGeometry& g) {
  check_input(input, g);
  const int mm = g.hf() * g.wf();
  const int per_image = g.ho() * g.wo();
  Im2colMatrix cols(g.c(), mm, g.n() * per_image);
  for (int c = 0; c < g.c(); ++c) {
    for (int hf = 0; hf < g.hf(); ++hf) {
      for (int wf = 0; wf < g.wf(); ++wf) {
        const int row = hf * g.wf() + wf;
        for (int n = 0; n < g.n(); ++n) {
          for (int ho = 0; ho < g.ho(); ++ho) {
            const int hi = ho * g.stride() + hf - g.pt();
            for (int wo = 0; wo < g.wo(); ++wo) {
              const int wi = wo * g.stride() + wf - g.pl();
              const int col = n * per_image + ho * g.wo() + wo;
              cols.at(c, row, col) = in_range(hi, g.hi()) && in_range(wi, g.wi())
                                         ? input.at(n, c, hi, wi)
                                         : 0.0f;
            }
          }
        }
      }
    }
  }
  return cols;
}

TensorNCHW col2im(const Im2colMatrix& cols, const ConvGeometry& g) {
  const int per_image = g.ho() * g.wo();
  if (cols.c() != g.c() || cols.mm() != g.hf() * g.wf() ||
      cols.nm() != g.n() * per_image) {
    throw ShapeError("column matrix does not match geometry " + g.to_string());
  }
  const std::size_t plane = static_cast<std::size_t>(g.hi()) * g.wi();
  std::vector<double> acc(plane);
  TensorNCHW out(g.n(), g.c(), g.hi(), g.wi());
  for (int n = 0; n < g.n(); ++n) {
    for (int c = 0; c < g.c(); ++c) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int hf = 0; hf < g.hf(); ++hf) {
        for (int wf = 0; wf < g.wf(); ++wf) {
          const int row = hf * g.wf() + wf;
          for (int ho = 0; ho < g.ho(); ++ho) {
            const int hi = ho * g.stride() + hf - g.pt();
            if (!in_range(hi, g.hi())) continue;
            for (int wo = 0; wo < g.wo(); ++wo) {
              const int wi = wo * g.stride() + wf - g.pl();
              if (!in_range(wi, g.wi())) continue;
              acc[static_cast<std::size_t>(hi) * g.wi() + wi] +=
                  cols.at(c, row, n * per_image + ho * g.wo() + wo);
            }
          }
        }
      }
      float* dst = out.plane(n, c);
      for (std::size_t i = 0; i < plane; ++i) dst[i] = static_cast<float>(acc[i]);
    }
  }
  return out;
}

TensorNCHW forward_gemm_baseline(const TensorNCHW& input,
                                 const FilterSet& filters,
                                 const ConvGeometry& g) {
  check_filters(filters, g);
  const Im2colMatrix cols = im2col(input, g);
  const int mm = cols.mm();
  const int nm = cols.nm();
  const int per_image = g.ho() * g.wo();
  std::vector<float> product(static_cast<std::size_t>(nm));
  TensorNCHW out(g.n(), g.c(), g.ho(), g.wo());
  for (int c = 0; c < g.c(); ++c) {
    // (1 x Mm) * (Mm x Nm)
    matmul(1, nm, mm, filters.channel(c), cols.data().data() +
                                              static_cast<std::size_t>(c) * mm * nm,
           product.data());
    for (int n = 0; n < g.n(); ++n) {
      std::copy_n(product.data() + static_cast<std::size_t>(n) * per_image,
                  per_image, out.plane(n, c));
    }
  }
  return out;
}

TensorNCHW backward_gemm_baseline(const TensorNCHW& dout,
                                  const FilterSet& filters,
                                  const ConvGeometry& g) {
  check_output(dout, g);
  check_filters(filters, g);
  const int mm = g.hf() * g.wf();
  const int per_image = g.ho() * g.wo();
  const int nm = g.n() * per_image;
  Im2colMatrix dcols(g.c(), mm, nm);
  std::vector<float> dout_row(static_cast<std::size_t>(nm));
  std::vector<float> block(static_cast<std::size_t>(mm) * nm);
  for (int c = 0; c < g.c(); ++c) {
    // dO' for channel c as a 1 x Nm row (K_m = 1).
    for (int n = 0; n < g.n(); ++n) {
      std::copy_n(dout.plane(n, c), per_image,
                  dout_row.data() + static_cast<std::size_t>(n) * per_image);
    }
    // (Mm x 1) * (1 x Nm)
    matmul(mm, nm, 1, filters.channel(c), dout_row.data(), block.data());
    for (int r = 0; r < mm; ++r) {
      for (int j = 0; j < nm; ++j) {
        dcols.at(c, r, j) = block[static_cast<std::size_t>(r) * nm + j];
      }
    }
  }
  return col2im(dcols, g);
}

FilterSet wgrad_gemm_baseline(const TensorNCHW& input, const TensorNCHW& dout,
                              const ConvGeometry& g) {
  check_output(dout, g);
  const Im2colMatrix cols = im2col(input, g);
  const int mm = cols.mm();
  const int nm = cols.nm();
  const int per_image = g.ho() * g.wo();
  std::vector<float> dout_col(static_cast<std::size_t>(nm));
  FilterSet df(g.c(), g.hf(), g.wf());
  for (int c = 0; c < g.c(); ++c) {
    for (int n = 0; n < g.n(); ++n) {
      std::copy_n(dout.plane(n, c), per_image,
                  dout_col.data() + static_cast<std::size_t>(n) * per_image);
    }
    // (Mm x Nm) * (Nm x 1)
    matmul(mm, 1, nm, cols.data().data() + static_cast<std::size_t>(c) * mm * nm,
           dout_col.data(), df.data().data() + df.flatten(c, 0, 0));
  }
  return df;
}

}  // namespace dwconv::reference
