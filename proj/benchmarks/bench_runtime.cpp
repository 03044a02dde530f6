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
#include "piadl/runtime.hpp"
#include "piadl/transport.hpp"

namespace {

using namespace piadl;

void BM_ParseListing(benchmark::State& state) {
  const auto src = transport::corpus_transport_adl();
  for (auto _ : state) benchmark::DoNotOptimize(parse_architecture(src));
}
BENCHMARK(BM_ParseListing);

void BM_RunListing(benchmark::State& state) {
  const auto arch = parse_architecture(transport::corpus_transport_adl());
  const std::vector<Value> inputs{Value::Int(1), Value::Int(state.range(0))};
  std::uint64_t steps = 0;
  for (auto _ : state) {
    auto t = run(arch, inputs, SchedulePolicy::Seeded(7), 1'000'000);
    steps += t.events.size();
    benchmark::DoNotOptimize(t);
  }
  state.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_RunListing)->Arg(1)->Arg(3)->Arg(10);

void BM_Fingerprint(benchmark::State& state) {
  const auto sc = transport::build_architecture(2, 2);
  auto c = load(sc.arch, sc.inputs);
  Scheduler s(SchedulePolicy::Seeded(3));
  for (int i = 0; i < 100; ++i) {
    const auto en = enabled(c);
    if (en.empty()) break;
    step_in_place(c, schedule_pick(en, s));
  }
  for (auto _ : state) benchmark::DoNotOptimize(fingerprint(c));
}
BENCHMARK(BM_Fingerprint);

}  // namespace
