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

#include <string>
#include <vector>

#include "piadl/gaia.hpp"
#include "piadl/transport.hpp"

namespace {

using namespace piadl;

std::vector<std::string> carrier_word(int laps) {
  std::vector<std::string> w;
  for (int i = 0; i < laps; ++i) {
    w.push_back("collisionSensorTrue");
    w.push_back("carrierWait");
    w.push_back("readSign");
    w.push_back("movetoNext");
  }
  w.push_back("readUnloadSign");
  w.push_back("waitforUnloading");
  w.push_back("unloadCarrier");
  return w;
}

void BM_MonitorStep(benchmark::State& state) {
  const auto& role = transport::roles()->role("Move_full");
  const auto proto = gaia::compile_monitor(role);
  const auto w = carrier_word(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto m = proto;
    for (const auto& s : w) benchmark::DoNotOptimize(m.step(s));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.size()));
}
BENCHMARK(BM_MonitorStep)->Arg(1)->Arg(6)->Arg(50);

void BM_OracleAccepts(benchmark::State& state) {
  const auto e = transport::roles()->role("Move_full").closed_liveness();
  const auto w = carrier_word(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gaia::brute_force_accepts(e, w));
}
BENCHMARK(BM_OracleAccepts)->Arg(1)->Arg(2);

void BM_CompileMonitor(benchmark::State& state) {
  const auto& role = transport::roles()->role("Move_full");
  for (auto _ : state) benchmark::DoNotOptimize(gaia::compile_monitor(role));
}
BENCHMARK(BM_CompileMonitor);

}  // namespace
