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

#include "dwconv_tools/bench_cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "dwconv/dwconv.h"

namespace dwconv::cli {
namespace {

using Clock = std::chrono::steady_clock;

struct Operands {
  TensorNCHW input;
  FilterSet filters;
  TensorNCHW dout;
};

Operands make_operands(const ConvGeometry& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  Operands ops{TensorNCHW(g.n(), g.c(), g.hi(), g.wi()), FilterSet(g.c(), g.hf(), g.wf()),
               TensorNCHW(g.n(), g.c(), g.ho(), g.wo())};
  for (float& x : ops.input.data()) x = dist(rng);
  for (float& x : ops.filters.data()) x = dist(rng);
  for (float& x : ops.dout.data()) x = dist(rng);
  return ops;
}

bool direct_supported(PassKind kind, const ConvGeometry& g) {
  switch (kind) {
    case PassKind::kForward: return forward_direct_supported(g);
    case PassKind::kBackward: return backward_direct_supported(g);
    case PassKind::kWeightGrad: return wgrad_direct_supported(g);
  }
  return false;
}

// The pass's result flattened, so all three passes compare the same way.
using PassFn = std::function<std::vector<float>()>;

template <class T>
std::vector<float> flat(const T& t) {
  return {t.data().begin(), t.data().end()};
}

PassFn make_pass(PassKind kind, Impl impl, const ConvGeometry& g, const Operands& ops,
                 const PassOptions& po) {
  namespace ref = reference;
  switch (kind) {
    case PassKind::kForward:
      if (impl == Impl::kDirect) return [&, po] { return flat(forward_direct(ops.input, ops.filters, g, po)); };
      if (impl == Impl::kGemm) return [&] { return flat(ref::forward_gemm_baseline(ops.input, ops.filters, g)); };
      return [&] { return flat(ref::forward_naive(ops.input, ops.filters, g)); };
    case PassKind::kBackward:
      if (impl == Impl::kDirect) return [&, po] { return flat(backward_direct(ops.dout, ops.filters, g, po)); };
      if (impl == Impl::kGemm) return [&] { return flat(ref::backward_gemm_baseline(ops.dout, ops.filters, g)); };
      return [&] { return flat(ref::backward_naive(ops.dout, ops.filters, g)); };
    case PassKind::kWeightGrad:
      if (impl == Impl::kDirect) return [&, po] { return flat(wgrad_direct(ops.input, ops.dout, g, po)); };
      if (impl == Impl::kGemm) return [&] { return flat(ref::wgrad_gemm_baseline(ops.input, ops.dout, g)); };
      return [&] { return flat(ref::wgrad_naive(ops.input, ops.dout, g)); };
  }
  throw std::logic_error("unknown pass");
}

// One untimed warm-up, then the median of `iters` timed runs. Returns the
// last result for checking.
std::pair<double, std::vector<float>> time_pass(const PassFn& pass, int iters) {
  std::vector<float> result = pass();
  std::vector<double> seconds;
  seconds.reserve(iters);
  for (int i = 0; i < iters; ++i) {
    const auto t0 = Clock::now();
    result = pass();
    seconds.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
  }
  std::sort(seconds.begin(), seconds.end());
  const std::size_t mid = seconds.size() / 2;
  const double median =
      seconds.size() % 2 ? seconds[mid] : 0.5 * (seconds[mid - 1] + seconds[mid]);
  return {median, std::move(result)};
}

// Main tile the direct pass runs with, for the traffic rows.
TileConfig direct_tile(PassKind kind, const ConvGeometry& g, const Options& o) {
  if (o.tile) return *o.tile;
  switch (kind) {
    case PassKind::kForward: return default_forward_tile(g);
    case PassKind::kBackward:
      return g.stride() == 1 ? default_forward_tile(backward_as_forward_geometry(g))
                             : TileConfig{6, 8};
    case PassKind::kWeightGrad: return default_wgrad_tile(g.stride());
  }
  return {};
}

void set_traffic(BenchRecord& r, double ta, double f, double o, double i) {
  r.tc_f = f;
  r.tc_o = o;
  r.tc_i = i;
  r.tc_total = f + o + i;
  r.ai = ta / *r.tc_total;
}

BenchRecord base_record(const LayerConfig& layer, const ConvGeometry& g, PassKind kind,
                        const std::string& impl, int threads) {
  BenchRecord r;
  r.name = layer.name;
  r.pass = to_string(kind);
  r.impl = impl;
  r.threads = threads;
  r.batch = g.n();
  return r;
}

std::vector<LayerConfig> load_layers(const Options& o) {
  return o.layers_file.empty() ? mobilenet_layer_suite() : load_layer_config(o.layers_file);
}

std::string format_value(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

const char* to_string(Impl impl) {
  switch (impl) {
    case Impl::kDirect: return "direct";
    case Impl::kNaive: return "naive";
    case Impl::kGemm: return "gemm";
  }
  return "?";
}

double check_tolerance(PassKind kind) {
  return kind == PassKind::kWeightGrad ? 1e-4 : 1e-5;
}

std::vector<BenchRecord> run_benchmarks(const Options& o, std::ostream& log) {
  const int threads = resolve_threads(o.threads);
  std::vector<BenchRecord> rows;
  for (const LayerConfig& layer : load_layers(o)) {
    const ConvGeometry g = o.batch ? layer.geometry.with_batch(*o.batch) : layer.geometry;
    const Operands ops = make_operands(g, o.seed);
    PassOptions po;
    po.threads = threads;
    po.cb = o.cb;
    po.tile = o.tile;
    for (PassKind kind : o.passes) {
      const double ta = g.flops();
      std::optional<std::vector<float>> oracle;
      std::vector<std::pair<Impl, double>> timings;
      const std::size_t first_row = rows.size();
      for (Impl impl : o.impls) {
        if (impl == Impl::kDirect && !direct_supported(kind, g)) {
          log << "skipping " << layer.name << " " << to_string(kind)
              << " direct: no direct kernel for " << g.to_string() << "\n";
          continue;
        }
        const int row_threads = impl == Impl::kDirect ? threads : 1;
        BenchRecord r = base_record(layer, g, kind, to_string(impl), row_threads);
        std::pair<double, std::vector<float>> timed;
        try {
          timed = time_pass(make_pass(kind, impl, g, ops, po), o.iters);
        } catch (const UnsupportedConfiguration& e) {
          log << "skipping " << layer.name << " " << to_string(kind) << " "
              << to_string(impl) << ": " << e.what() << "\n";
          continue;
        }
        r.seconds_median = timed.first;
        r.gflops = ta / timed.first / 1e9;
        timings.emplace_back(impl, timed.first);
        if (o.check) {
          if (impl == Impl::kNaive) {
            r.max_rel_err = 0.0;
          } else {
            if (!oracle) oracle = make_pass(kind, Impl::kNaive, g, ops, po)();
            r.max_rel_err = max_relative_error(timed.second, *oracle);
            r.check_failed = !(*r.max_rel_err <= check_tolerance(kind));
          }
        }
        if (o.traffic && kind == PassKind::kForward) {
          const double nc = static_cast<double>(g.n()) * g.c();
          const double out = static_cast<double>(g.ho()) * g.wo();
          if (impl == Impl::kDirect) {
            const TrafficReport t = traffic_ours(g, direct_tile(kind, g, o));
            set_traffic(r, ta, t.tc_f, t.tc_o, t.tc_i);
          } else if (impl == Impl::kNaive) {
            // No register reuse: every tap is a load.
            set_traffic(r, ta, 4 * nc * g.hf() * g.wf(), 4 * nc * out,
                        4 * nc * out * g.hf() * g.wf());
          }
        }
        rows.push_back(std::move(r));
      }
      if (o.baseline) {
        const auto base = std::find_if(timings.begin(), timings.end(),
                                       [&](const auto& t) { return t.first == *o.baseline; });
        if (base != timings.end()) {
          for (std::size_t i = first_row; i < rows.size(); ++i) {
            rows[i].speedup_vs_baseline = base->second / *rows[i].seconds_median;
          }
        }
      }
      if (o.traffic) {
        if (kind == PassKind::kForward) {
          BenchRecord tg = base_record(layer, g, kind, "tengine-model", 1);
          const TrafficReport t = traffic_tengine(g);
          set_traffic(tg, ta, t.tc_f, t.tc_o, t.tc_i);
          rows.push_back(std::move(tg));
        }
        if (direct_supported(kind, g)) {
          // Columns hold each tensor's transfers: the filter (F or dF), the
          // output side (O or dO) and the input side (I or dI).
          const MeasuredTraffic m = measure_traffic(kind, g, direct_tile(kind, g, o));
          BenchRecord mr = base_record(layer, g, kind, "direct-measured", 1);
          set_traffic(mr, ta, 4.0 * (m.loads_f + m.stores_f), 4.0 * (m.loads_o + m.stores_o),
                      4.0 * (m.loads_i + m.zero_fill_i + m.stores_i));
          rows.push_back(std::move(mr));
        }
      }
    }
  }
  return rows;
}

std::string format_row(const BenchRecord& r) {
  std::ostringstream os;
  os << r.name << ',' << r.pass << ',' << r.impl << ',' << r.threads << ',' << r.batch;
  for (const auto* v : {&r.seconds_median, &r.gflops, &r.speedup_vs_baseline, &r.max_rel_err,
                        &r.tc_f, &r.tc_o, &r.tc_i, &r.tc_total, &r.ai}) {
    os << ',' << format_value(*v);
  }
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Depthwise convolution correctness checks and benchmarks"};
  app.name("dwconv_bench");
  Options o;
  std::string op = "fwd";
  std::string impl = "direct";
  std::string suite;
  std::string tile;
  std::string baseline;
  app.add_option("--op", op, "Pass to run")
      ->check(CLI::IsMember({"fwd", "bwd", "wgrad", "all"}));
  app.add_option("--impl", impl, "Comma list of direct, naive, gemm");
  auto* suite_opt = app.add_option("--suite", suite, "Built-in layer suite")
                        ->check(CLI::IsMember({"mobilenet"}));
  app.add_option("--layers", o.layers_file, "Layer config file")
      ->check(CLI::ExistingFile)
      ->excludes(suite_opt);
  app.add_option("--batch", o.batch, "Override the batch size of every layer")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", o.threads,
                 "Worker threads for the direct passes (0: DWCONV_THREADS or hardware)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--iters", o.iters, "Timed iterations; the median is reported")
      ->check(CLI::PositiveNumber);
  app.add_option("--tile", tile, "Main register tile HxW of the direct passes");
  app.add_option("--cb", o.cb, "Channel block size (0: heuristic)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--check", o.check, "Compare every result with the naive oracle");
  app.add_flag("--traffic", o.traffic, "Append traffic model and measured counts");
  app.add_option("--csv", o.csv_path, "Write the CSV here instead of stdout");
  app.add_option("--seed", o.seed, "Seed of the operand generator");
  app.add_option("--baseline", baseline, "Implementation the speedup column is relative to")
      ->check(CLI::IsMember({"direct", "naive", "gemm"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "dwconv_bench: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  auto parse_impl = [](const std::string& s) -> std::optional<Impl> {
    if (s == "direct") return Impl::kDirect;
    if (s == "naive") return Impl::kNaive;
    if (s == "gemm") return Impl::kGemm;
    return std::nullopt;
  };
  o.impls.clear();
  for (const auto& name : split_list(impl)) {
    const auto parsed = parse_impl(name);
    if (!parsed) {
      err << "dwconv_bench: unknown implementation '" << name << "'\n";
      return 2;
    }
    if (std::find(o.impls.begin(), o.impls.end(), *parsed) == o.impls.end())
      o.impls.push_back(*parsed);
  }
  if (o.impls.empty()) {
    err << "dwconv_bench: --impl needs at least one implementation\n";
    return 2;
  }
  if (op == "all") {
    o.passes = {PassKind::kForward, PassKind::kBackward, PassKind::kWeightGrad};
  } else {
    o.passes = {op == "fwd" ? PassKind::kForward
                : op == "bwd" ? PassKind::kBackward
                              : PassKind::kWeightGrad};
  }
  if (!tile.empty()) {
    try {
      o.tile = parse_tile(tile);
    } catch (const std::invalid_argument& e) {
      err << "dwconv_bench: " << e.what() << "\n";
      return 2;
    }
  }
  if (!baseline.empty()) o.baseline = parse_impl(baseline);

  std::vector<BenchRecord> rows;
  try {
    rows = run_benchmarks(o, err);
  } catch (const ParseError& e) {
    err << o.layers_file << ":" << e.line() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "dwconv_bench: " << e.what() << "\n";
    return 2;
  }

  std::ofstream file;
  if (!o.csv_path.empty()) {
    file.open(o.csv_path);
    if (!file) {
      err << "dwconv_bench: cannot write " << o.csv_path << "\n";
      return 2;
    }
  }
  std::ostream& csv = o.csv_path.empty() ? out : file;
  csv << "# seed=" << o.seed << "\n" << kCsvHeader << "\n";
  int failures = 0;
  for (const auto& r : rows) {
    csv << format_row(r) << "\n";
    if (r.check_failed) {
      ++failures;
      err << "check failed: " << r.name << " " << r.pass << " " << r.impl
          << " max_rel_err=" << format_value(r.max_rel_err) << " tolerance="
          << check_tolerance(r.pass == "wgrad" ? PassKind::kWeightGrad : PassKind::kForward)
          << "\n";
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace dwconv::cli
