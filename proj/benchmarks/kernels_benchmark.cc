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

// Throughput of the direct passes against the naive and im2col/GEMM
// baselines on MobileNet layers. Counters report GFLOP/s (2*N*C*Ho*Wo*9
// flops per pass).

#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "dwconv/dwconv.h"

namespace dwconv {
namespace {

const LayerConfig& suite_layer(int index) {
  static const auto suite = mobilenet_layer_suite();
  return suite.at(static_cast<std::size_t>(index));
}

struct Operands {
  ConvGeometry geom;
  TensorNCHW input;
  FilterSet filters;
  TensorNCHW dout;

  explicit Operands(const ConvGeometry& g)
      : geom(g),
        input(g.n(), g.c(), g.hi(), g.wi()),
        filters(g.c(), 3, 3),
        dout(g.n(), g.c(), g.ho(), g.wo()) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<float> d(-1.0f, 1.0f);
    for (float& x : input.data()) x = d(rng);
    for (float& x : filters.data()) x = d(rng);
    for (float& x : dout.data()) x = d(rng);
  }
};

void finish(benchmark::State& state, const Operands& ops) {
  state.SetLabel(suite_layer(static_cast<int>(state.range(0))).name);
  state.counters["GFLOPS"] = benchmark::Counter(
      ops.geom.flops() * 1e-9, benchmark::Counter::kIsIterationInvariantRate);
}

PassOptions options(const benchmark::State& state) {
  PassOptions o;
  o.threads = static_cast<int>(state.range(1));
  return o;
}

void BM_ForwardDirect(benchmark::State& state) {
  const Operands ops(suite_layer(static_cast<int>(state.range(0))).geometry);
  const PassOptions o = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(forward_direct(ops.input, ops.filters, ops.geom, o));
  finish(state, ops);
}

void BM_ForwardGemm(benchmark::State& state) {
  const Operands ops(suite_layer(static_cast<int>(state.range(0))).geometry);
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::forward_gemm_baseline(ops.input, ops.filters, ops.geom));
  finish(state, ops);
}

void BM_ForwardNaive(benchmark::State& state) {
  const Operands ops(suite_layer(static_cast<int>(state.range(0))).geometry);
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::forward_naive(ops.input, ops.filters, ops.geom));
  finish(state, ops);
}

void BM_BackwardDirect(benchmark::State& state) {
  const Operands ops(suite_layer(static_cast<int>(state.range(0))).geometry);
  const PassOptions o = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(backward_direct(ops.dout, ops.filters, ops.geom, o));
  finish(state, ops);
}

void BM_BackwardGemm(benchmark::State& state) {
  const Operands ops(suite_layer(static_cast<int>(state.range(0))).geometry);
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::backward_gemm_baseline(ops.dout, ops.filters, ops.geom));
  finish(state, ops);
}

void BM_WgradDirect(benchmark::State& state) {
  const Operands ops(suite_layer(static_cast<int>(state.range(0))).geometry);
  const PassOptions o = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(wgrad_direct(ops.input, ops.dout, ops.geom, o));
  finish(state, ops);
}

void BM_WgradGemm(benchmark::State& state) {
  const Operands ops(suite_layer(static_cast<int>(state.range(0))).geometry);
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::wgrad_gemm_baseline(ops.input, ops.dout, ops.geom));
  finish(state, ops);
}

// Every suite layer, single thread.
void all_layers(benchmark::internal::Benchmark* b) {
  for (int i = 0; i < static_cast<int>(mobilenet_layer_suite().size()); ++i) b->Args({i, 1});
}

// Layer 0 (112x112, C=32, s=1) and layer 1 (s=2) only; the baselines are slow.
void first_layers(benchmark::internal::Benchmark* b) {
  b->Args({0, 1})->Args({1, 1});
}

BENCHMARK(BM_ForwardDirect)->Apply(all_layers)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ForwardGemm)->Apply(first_layers)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ForwardNaive)->Apply(first_layers)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BackwardDirect)->Apply(all_layers)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BackwardGemm)->Apply(first_layers)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_WgradDirect)->Apply(all_layers)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_WgradGemm)->Apply(first_layers)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace dwconv

BENCHMARK_MAIN();
