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

#include "dwconv/parallel.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

#include "dwconv/backward.h"
#include "dwconv/forward.h"
#include "dwconv/tile.h"

namespace dwconv {
namespace {

int floor_pow2(int v) {
  int p = 1;
  while (p * 2 <= v) p *= 2;
  return p;
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

int default_row_quantum(const ConvGeometry& g, PassKind kind) {
  switch (kind) {
    case PassKind::kForward:
      return g.hf() == 3 && g.wf() == 3 ? select_tile(g).row_quantum : 1;
    case PassKind::kBackward:
      if (g.stride() == 1 && g.hf() == 3 && g.wf() == 3) {
        return select_tile(backward_as_forward_geometry(g)).row_quantum;
      }
      return g.stride() == 2 ? 6 : 1;
    case PassKind::kWeightGrad:
      return 1;
  }
  return 1;
}

}  // namespace

const char* to_string(PassKind kind) {
  switch (kind) {
    case PassKind::kForward: return "fwd";
    case PassKind::kBackward: return "bwd";
    case PassKind::kWeightGrad: return "wgrad";
  }
  return "?";
}

int default_channel_block(int n, int c, int threads) {
  const long long want =
      static_cast<long long>(c) * n / (4LL * std::max(threads, 1));
  const int cb = static_cast<int>(std::min<long long>(c, std::max<long long>(1, want)));
  return floor_pow2(cb);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DWCONV_THREADS")) {
    int v = 0;
    auto [p, ec] = std::from_chars(env, env + std::strlen(env), v);
    if (ec == std::errc() && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

WorkPlan plan(const ConvGeometry& g, PassKind kind, int threads, int cb,
              int row_quantum) {
  WorkPlan wp;
  wp.threads = std::max(threads, 1);
  const int rows = kind == PassKind::kBackward ? g.hi() : g.ho();

  if (kind == PassKind::kWeightGrad) {
    wp.cb = 1;
    for (int c = 0; c < g.c(); ++c) {
      wp.items.push_back(WorkItem{0, g.n(), c, c + 1, 0, rows});
    }
    return wp;
  }

  wp.cb = cb > 0 ? std::min(cb, g.c()) : default_channel_block(g.n(), g.c(), wp.threads);
  const int quantum = row_quantum > 0 ? row_quantum : default_row_quantum(g, kind);
  const int c_blocks = ceil_div(g.c(), wp.cb);
  const long long base_items = static_cast<long long>(g.n()) * c_blocks;

  // Contiguous row blocks made of whole quanta.
  int row_blocks = 1;
  const int quanta = ceil_div(rows, quantum);
  if (base_items < wp.threads) {
    row_blocks = std::min<long long>(quanta, ceil_div(wp.threads, static_cast<int>(base_items)));
  }

  for (int n = 0; n < g.n(); ++n) {
    for (int c0 = 0; c0 < g.c(); c0 += wp.cb) {
      const int c1 = std::min(c0 + wp.cb, g.c());
      // Quanta spread evenly; every block non-empty since row_blocks <= quanta.
      for (int b = 0; b < row_blocks; ++b) {
        const int q0 = static_cast<int>(static_cast<long long>(b) * quanta / row_blocks);
        const int q1 = static_cast<int>(static_cast<long long>(b + 1) * quanta / row_blocks);
        const int h0 = q0 * quantum;
        const int h1 = std::min(rows, q1 * quantum);
        wp.items.push_back(WorkItem{n, n + 1, c0, c1, h0, h1});
      }
    }
  }
  return wp;
}

void execute(const WorkPlan& plan,
             const std::function<void(const WorkItem&)>& work) {
  const std::size_t count = plan.items.size();
  if (count == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(plan.threads, 1)), count);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        work(plan.items[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace dwconv
