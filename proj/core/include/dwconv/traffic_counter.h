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

#include <cstdint>

namespace dwconv {

// Tensor-element transfers between registers and memory recorded by an
// instrumented pass. Counts are elements, not bytes.
//
//   loads_i     I (forward, wgrad)
//   loads_f     F (forward, backward)
//   loads_o     dO (backward, wgrad)
//   stores_o    O (forward)
//   stores_i    dI (backward)
//   stores_f    dF (wgrad)
//   zero_fill_i padding slots of a row window that were materialized as
//               zeros in registers instead of being loaded
struct MeasuredTraffic {
  std::int64_t loads_i = 0;
  std::int64_t loads_f = 0;
  std::int64_t loads_o = 0;
  std::int64_t stores_o = 0;
  std::int64_t stores_i = 0;
  std::int64_t stores_f = 0;
  std::int64_t zero_fill_i = 0;

  MeasuredTraffic& operator+=(const MeasuredTraffic& o) {
    loads_i += o.loads_i;
    loads_f += o.loads_f;
    loads_o += o.loads_o;
    stores_o += o.stores_o;
    stores_i += o.stores_i;
    stores_f += o.stores_f;
    zero_fill_i += o.zero_fill_i;
    return *this;
  }

  friend bool operator==(const MeasuredTraffic&, const MeasuredTraffic&) = default;
};

namespace detail {

// Counting shims the kernels are instantiated with. The no-op variant
// compiles away entirely.
struct NoCounter {
  static constexpr bool kEnabled = false;
  void load_input(std::int64_t) {}
  void load_filter(std::int64_t) {}
  void load_output(std::int64_t) {}
  void store_output(std::int64_t) {}
  void zero_fill(std::int64_t) {}
};

// Role-based tally: "input" is the tensor a kernel streams through its row
// windows, "output" the tensor it stores. Pass drivers map roles onto the
// MeasuredTraffic fields.
struct TallyCounter {
  static constexpr bool kEnabled = true;
  std::int64_t input = 0;
  std::int64_t filter = 0;
  std::int64_t output_loads = 0;
  std::int64_t output_stores = 0;
  std::int64_t zeros = 0;

  void load_input(std::int64_t k) { input += k; }
  void load_filter(std::int64_t k) { filter += k; }
  void load_output(std::int64_t k) { output_loads += k; }
  void store_output(std::int64_t k) { output_stores += k; }
  void zero_fill(std::int64_t k) { zeros += k; }

  TallyCounter& operator+=(const TallyCounter& o) {
    input += o.input;
    filter += o.filter;
    output_loads += o.output_loads;
    output_stores += o.output_stores;
    zeros += o.zeros;
    return *this;
  }
};

}  // namespace detail
}  // namespace dwconv
