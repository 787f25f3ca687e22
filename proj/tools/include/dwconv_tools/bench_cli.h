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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dwconv/analysis.h"
#include "dwconv/parallel.h"
#include "dwconv/tile.h"

namespace dwconv::cli {

enum class Impl { kDirect, kNaive, kGemm };

const char* to_string(Impl impl);

struct Options {
  std::vector<PassKind> passes{PassKind::kForward};
  std::vector<Impl> impls{Impl::kDirect};
  // Empty means the built-in MobileNet suite.
  std::string layers_file;
  std::optional<int> batch;
  int threads = 0;
  int iters = 10;
  std::optional<TileConfig> tile;
  int cb = 0;
  bool check = false;
  bool traffic = false;
  std::string csv_path;
  unsigned seed = 42;
  std::optional<Impl> baseline;
};

// One CSV row. Optional fields print as empty cells.
struct BenchRecord {
  std::string name;
  std::string pass;
  std::string impl;
  int threads = 1;
  int batch = 1;
  std::optional<double> seconds_median;
  std::optional<double> gflops;
  std::optional<double> speedup_vs_baseline;
  std::optional<double> max_rel_err;
  std::optional<double> tc_f;
  std::optional<double> tc_o;
  std::optional<double> tc_i;
  std::optional<double> tc_total;
  std::optional<double> ai;
  // Set by --check when max_rel_err exceeds the pass tolerance.
  bool check_failed = false;
};

inline constexpr const char* kCsvHeader =
    "name,pass,impl,threads,batch,seconds_median,gflops,speedup_vs_baseline,"
    "max_rel_err,tc_f,tc_o,tc_i,tc_total,ai";

// Oracle tolerance of a pass: 1e-5 forward and backward, 1e-4 weight gradient.
double check_tolerance(PassKind kind);

// Runs every selected layer x pass x implementation. Unsupported
// combinations are reported on `log` and skipped.
std::vector<BenchRecord> run_benchmarks(const Options& options, std::ostream& log);

std::string format_row(const BenchRecord& record);

// Full command line entry point. Writes the CSV (header, "# seed=N" line and
// rows) to `out` or to --csv. Returns 0 on success, 1 when a --check fails,
// 2 on usage or layer-file errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dwconv::cli
