// Copyright 2026 The elfz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "elfz/rng.hpp"
#include "elfz/selection.hpp"
#include "elfz/toy_sut.hpp"

namespace {

using namespace elfz;

std::vector<std::string> random_cases(size_t count) {
  Rng rng(1);
  std::vector<std::string> cases(count);
  for (auto& c : cases) {
    const size_t len = uniform(rng, 0, 16);
    for (size_t i = 0; i < len; ++i) c += "()*"[uniform(rng, 0, 2)];
  }
  return cases;
}

std::vector<Candidate> random_pool(size_t m, CoverageUnit universe) {
  Rng rng(2);
  std::vector<Candidate> pool;
  for (size_t i = 0; i < m; ++i) {
    CoverSet c;
    for (CoverageUnit u = 0; u < universe; ++u)
      if (bernoulli(rng, 0.2)) c.insert(u);
    pool.push_back({"c" + std::to_string(1000 + i), c});
  }
  return pool;
}

template <bool Parallel>
void BM_ToyCover(benchmark::State& state) {
  const auto cases = random_cases(static_cast<size_t>(state.range(0)));
  BalancedParens sut;
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? toy_cover(sut, cases) : toy_cover_serial(sut, cases));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ToyCover<false>)->Name("toy_cover/serial")->Arg(1000)->Arg(100000);
BENCHMARK(BM_ToyCover<true>)->Name("toy_cover/parallel")->Arg(1000)->Arg(100000);

template <bool Parallel>
void BM_ApproxMax(benchmark::State& state) {
  const auto pool = random_pool(static_cast<size_t>(state.range(0)), 2000);
  const SelectionConfig cfg{10, 10, 7};
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? approx_max(pool, cfg) : approx_max_serial(pool, cfg));
}
BENCHMARK(BM_ApproxMax<false>)->Name("approx_max/serial")->Arg(50)->Arg(200);
BENCHMARK(BM_ApproxMax<true>)->Name("approx_max/parallel")->Arg(50)->Arg(200);

template <bool Parallel>
void BM_BruteForce(benchmark::State& state) {
  const auto pool = random_pool(static_cast<size_t>(state.range(0)), 200);
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? brute_force_max(pool, 4) : brute_force_max_serial(pool, 4));
}
BENCHMARK(BM_BruteForce<false>)->Name("brute_force_max/serial")->Arg(16)->Arg(30);
BENCHMARK(BM_BruteForce<true>)->Name("brute_force_max/parallel")->Arg(16)->Arg(30);

}  // namespace

BENCHMARK_MAIN();
