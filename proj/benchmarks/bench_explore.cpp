/*
 * Copyright (c) 2026, The piadl Authors
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

#include <benchmark/benchmark.h>

#include "piadl/parser.hpp"
#include "piadl/transport.hpp"
#include "piadl/verifier.hpp"

namespace {

using namespace piadl;

void BM_ExploreListing(benchmark::State& state) {
  const auto init = load(parse_architecture(transport::corpus_transport_adl()),
                         {Value::Int(1), Value::Int(1)});
  verifier::ExploreOptions opt;
  opt.depth = 200;
  opt.reduce_local_steps = state.range(0) != 0;
  std::uint64_t states = 0;
  for (auto _ : state) {
    const auto r = verifier::explore(init, transport::make_observer(1), opt);
    states += r.states;
  }
  state.counters["states/s"] = benchmark::Counter(static_cast<double>(states), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_ExploreListing)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ExploreFleet(benchmark::State& state) {
  const auto sc = transport::build_architecture(2, 1);
  const auto init = load(sc.arch, sc.inputs);
  verifier::ExploreOptions opt;
  opt.depth = static_cast<std::uint64_t>(state.range(0));
  opt.reduce_local_steps = true;
  for (auto _ : state) benchmark::DoNotOptimize(verifier::explore(init, transport::make_observer(1), opt));
}
BENCHMARK(BM_ExploreFleet)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
