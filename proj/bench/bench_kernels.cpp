/* Copyright 2026 The qwire Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "qwire/observables.hpp"
#include "qwire/tlsolver.hpp"

namespace {

using namespace qwire;

const DisorderSpec kSpec = DisorderSpec::uncorrelated({0.5, 0.5}, 1);
const TightBindingFamily kFamily({{-1.0}, {1.0}});

std::vector<double> grid(std::size_t n, double lo, double hi) {
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return e;
}

void BM_Operator(benchmark::State& state, bool parallel) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CanonicalModel m = kFamily.at(0.4);
  const FunctionalOperator op(m, kSpec, n);
  PhaseDistributions in = PhaseDistributions::uniform(0.4, 2, n), out;
  for (auto _ : state) {
    if (parallel)
      op.apply(in, out);
    else
      op.apply_serial(in, out);
    benchmark::DoNotOptimize(out.w[0].data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * (n + 1)));
}

void BM_NodeCountDos(benchmark::State& state, bool parallel) {
  const WireSequence seq = generate_sequence(kSpec, static_cast<std::size_t>(state.range(0)));
  const std::vector<double> es = grid(64, -3.0, 3.0);
  for (auto _ : state) {
    auto r = parallel ? node_count_dos(kFamily, seq, es) : node_count_dos_serial(kFamily, seq, es);
    benchmark::DoNotOptimize(r.data());
  }
}

void BM_TlDos(benchmark::State& state, bool parallel) {
  SolverOptions o;
  o.n_theta = static_cast<std::size_t>(state.range(0));
  o.tol = 1e-9;
  const std::vector<double> es = grid(32, -2.9, 2.9);
  for (auto _ : state) {
    auto r = parallel ? tl_dos(kFamily, kSpec, es, o) : tl_dos_serial(kFamily, kSpec, es, o);
    benchmark::DoNotOptimize(r.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Operator, serial, false)->Arg(4096)->Arg(16384);
BENCHMARK_CAPTURE(BM_Operator, openmp, true)->Arg(4096)->Arg(16384);
BENCHMARK_CAPTURE(BM_NodeCountDos, serial, false)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_NodeCountDos, openmp, true)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TlDos, serial, false)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TlDos, openmp, true)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
