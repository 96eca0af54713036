/*
 * Copyright 2026 The realmsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <benchmark/benchmark.h>

#include "realm/erealm/dotq.hpp"
#include "realm/harness/area.hpp"
#include "realm/harness/runner.hpp"
#include "realm/irealm/fragment.hpp"
#include "realm/platform/system.hpp"

namespace {

using namespace realm;

// Raw kernel throughput on the interference platform with the DMA fragmented
// to single beats, i.e. the busiest configuration the sweeps use.
void BM_SystemCycles(benchmark::State& state) {
  auto cfg = harness::preset("frag_sweep");
  const auto regs = harness::sweep_registers(cfg, static_cast<double>(state.range(0)));
  for (auto _ : state) {
    state.PauseTiming();
    platform::System sys(cfg.system);
    sys.sim().set_tracing(false);
    if (!regs.empty()) sys.program(0, regs);
    state.ResumeTiming();
    for (int i = 0; i < 10000; ++i) sys.sim().step();
    benchmark::DoNotOptimize(sys.manager(0).bytes_completed());
  }
  state.SetItemsProcessed(state.iterations() * 10000);
  state.counters["cycles/s"] = benchmark::Counter(static_cast<double>(state.iterations()) * 10000,
                                                  benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SystemCycles)->Arg(0)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_TracingOverhead(benchmark::State& state) {
  auto cfg = harness::preset("dma_latency");
  for (auto _ : state) {
    platform::System sys(cfg.system);
    sys.sim().set_tracing(state.range(0) != 0);
    for (int i = 0; i < 10000; ++i) sys.sim().step();
    benchmark::DoNotOptimize(sys.sim().trace().size());
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_TracingOverhead)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SweepPoint(benchmark::State& state) {
  auto cfg = harness::preset("frag_sweep");
  const auto base = harness::isolated_baselines(cfg);
  for (auto _ : state) {
    auto out = harness::run_point(cfg, 1.0, &base);
    benchmark::DoNotOptimize(out.report.cycles);
  }
}
BENCHMARK(BM_SweepPoint)->Unit(benchmark::kMillisecond);

void BM_SplitRequest(benchmark::State& state) {
  protocol::TxnDescriptor t;
  t.len_beats = 256;
  const auto g = static_cast<std::uint16_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(irealm::split_request(t, g));
}
BENCHMARK(BM_SplitRequest)->Arg(1)->Arg(16)->Arg(256);

void BM_DotqInsertRetire(benchmark::State& state) {
  erealm::Dotq q(protocol::Direction::Read, 4, 4, {});
  protocol::TxnDescriptor t;
  t.len_beats = 4;
  protocol::Cycle now = 0;
  for (auto _ : state) {
    for (std::uint32_t tid = 0; tid < 4; ++tid) q.insert(t, tid, 0, now);
    for (std::uint32_t tid = 0; tid < 4; ++tid) q.retire(q.head(tid), ++now);
  }
  state.SetItemsProcessed(state.iterations() * 4);
}
BENCHMARK(BM_DotqInsertRetire);

void BM_AreaEstimate(benchmark::State& state) {
  const auto p = harness::hermes_area_params();
  for (auto _ : state) benchmark::DoNotOptimize(harness::area_estimate(p).total_ge);
}
BENCHMARK(BM_AreaEstimate);

}  // namespace

BENCHMARK_MAIN();
