/*
katpack

Copyright 2026 The katpack authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
// Serial Gauss-Seidel against OpenMP Jacobi sweeps on maximal packings of
// constant-degree balls. Newton steps are off so both run plain sweeps.

#include <benchmark/benchmark.h>

#include <map>

#include "katpack/complex.hpp"
#include "katpack/solver.hpp"

namespace
{

using namespace katpack;

// generations of the degree-7 ball; vertex counts grow geometrically
const Triangulation& ball(int generations)
{
    static std::map<int, Triangulation> cache;
    auto it = cache.find(generations);
    if (it == cache.end()) it = cache.emplace(generations, constant_degree_ball(7, generations)).first;
    return it->second;
}

void run(benchmark::State& state, bool jacobi, int threads)
{
    const auto& T = ball(static_cast<int>(state.range(0)));
    SolveOptions o;
    o.newton = false;
    o.jacobi = jacobi;
    o.threads = threads;
    long sweeps = 0;
    for (auto _ : state) {
        auto sol = maximal_disk_label(T, {}, o);
        sweeps = sol.report.iterations;
        benchmark::DoNotOptimize(sol.label.r.data());
    }
    state.counters["vertices"] = T.num_vertices();
    state.counters["sweeps"] = static_cast<double>(sweeps);
}

void BM_GaussSeidel(benchmark::State& state) { run(state, false, 1); }
void BM_Jacobi(benchmark::State& state) { run(state, true, static_cast<int>(state.range(1))); }

}  // namespace

BENCHMARK(BM_GaussSeidel)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Jacobi)->ArgsProduct({{3, 5, 7}, {1, 2, 4}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
