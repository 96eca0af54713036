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


#include "realm/harness/runner.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include <fmt/format.h>

#include "realm/protocol/trace_format.hpp"

namespace realm::harness {

using platform::Manager;
using platform::System;

const ManagerMetrics& MetricsReport::manager(std::string_view n) const {
  for (const auto& m : managers)
    if (m.name == n) return m;
  throw sim::ConfigError(fmt::format("report {}: no manager named '{}'", scenario, n));
}

namespace {

// Periodic schedules: mean activation duration without the first
// activation, which starts from an empty system.
std::optional<Cycle> runtime_of(const Manager& m) {
  if (m.spec().kind == platform::ManagerKind::Periodic) {
    const auto& acts = m.activations();
    if (acts.empty()) return std::nullopt;
    const std::size_t from = acts.size() > 1 ? 1 : 0;
    Cycle sum = 0;
    for (std::size_t k = from; k < acts.size(); ++k) {
      if (!acts[k].complete) return std::nullopt;
      sum += acts[k].finish - acts[k].start;
    }
    const auto n = static_cast<Cycle>(acts.size() - from);
    return (sum + n / 2) / n;
  }
  if (m.unbounded() || !m.finish_cycle()) return std::nullopt;
  return *m.finish_cycle() - m.spec().start_cycle;
}

ManagerMetrics measure(const Manager& m, unsigned warmup, Cycle cycles) {
  ManagerMetrics out;
  out.name = m.spec().name;
  out.bytes = m.bytes_completed();
  out.errors = m.errors();
  out.runtime = runtime_of(m);
  out.complete = m.unbounded() || m.done();
  Cycle total = 0;
  for (const auto& r : m.completed()) {
    total += r.latency();
    out.max_lat = std::max(out.max_lat, r.latency());
  }
  if (!m.completed().empty()) out.mean_lat = static_cast<double>(total) / static_cast<double>(m.completed().size());
  Cycle steady = 0;
  std::size_t n = 0;
  unsigned skipped = 0;
  for (const auto& r : m.completed()) {
    if (!r.txn.is_read()) continue;
    if (skipped < warmup) {
      ++skipped;
      continue;
    }
    steady += r.latency();
    ++n;
  }
  if (n) out.steady_read_lat = static_cast<double>(steady) / static_cast<double>(n);
  if (cycles) out.bandwidth = static_cast<double>(m.beats_completed()) / static_cast<double>(cycles);
  for (const auto& a : m.activations()) out.deficit_bytes += a.deficit;
  return out;
}

std::optional<Cycle> first_at_or_after(const std::vector<Cycle>& v, Cycle c) {
  auto it = std::lower_bound(v.begin(), v.end(), c);
  if (it == v.end()) return std::nullopt;
  return *it;
}

}  // namespace

InterruptService::InterruptService(System& sys, Cycle latency, std::uint32_t programmer)
    : sys_(sys), latency_(latency), programmer_(programmer) {
  const auto n = sys.erealm(0) ? sys.num_subordinates() : 0;
  due_.resize(n);
  seen_irq_.resize(n);
  irqs_.resize(n);
  notified_.resize(n);
}

void InterruptService::after_cycle() {
  const Cycle now = sys_.sim().cycle();
  bool quiet = true;
  for (std::size_t j = 0; j < due_.size(); ++j) {
    auto* u = sys_.erealm(j);
    if (u->irq() && !seen_irq_[j]) {
      seen_irq_[j] = true;
      const Cycle at = u->irq_cycle().value_or(now);
      irqs_[j].push_back(at);
      due_[j] = at + latency_;
    }
    if (due_[j] && now >= *due_[j]) {
      auto& rf = sys_.erealm_registers(j);
      if (!rf.guard().claimed()) rf.write(programmer_, "guard", programmer_ + 1);
      rf.write(programmer_, System::erealm_prefix(j) + ".clear", 1);
      notified_[j].push_back(now);
      due_[j].reset();
    }
    if (!u->irq()) seen_irq_[j] = false;
    if (u->irq() || u->in_recovery() || due_[j]) quiet = false;
  }
  if (!quiet) return;
  for (std::size_t i = 0; i < sys_.num_managers(); ++i) {
    auto& m = sys_.manager(i);
    if (m.held_retries() && m.outstanding() == 0) m.release_retries();
  }
}

Baselines isolated_baselines(const ScenarioConfig& cfg) {
  cfg.validate();
  Baselines out;
  for (std::size_t i = 0; i < cfg.system.managers.size(); ++i) {
    const auto& ms = cfg.system.managers[i];
    if (ms.kind == platform::ManagerKind::DmaBurst && ms.total_bytes == 0) continue;
    platform::SystemSpec spec = cfg.system;
    spec.managers = {ms};
    spec.with_units = false;
    spec.seed = cfg.system.seed + i;
    // The isolated reference is fault-free; injected faults belong to the
    // contended run only.
    for (auto& s : spec.subordinates) s.spec.fault.reset();
    System sys(spec);
    sys.sim().set_tracing(false);
    if (sys.run(cfg.max_cycles).status != sim::RunStatus::Completed) continue;
    if (auto rt = runtime_of(sys.manager(0))) out[ms.name] = *rt;
  }
  return out;
}

RunOutput run_point(const ScenarioConfig& cfg, std::optional<double> sweep_value, const Baselines* baselines,
                    bool keep_trace) {
  cfg.validate();
  RunOutput out;
  auto& rep = out.report;
  rep.scenario = cfg.name;
  rep.sweep_value = sweep_value;

  System sys(cfg.system);
  sys.sim().set_tracing(keep_trace);
  RegisterList regs = cfg.registers;
  if (sweep_value) {
    auto extra = sweep_registers(cfg, *sweep_value);
    regs.insert(regs.end(), extra.begin(), extra.end());
  }
  if (!regs.empty()) {
    if (auto err = sys.program(cfg.programmer, regs))
      throw sim::ConfigError(fmt::format("scenario {}: {}", cfg.name, *err));
  }

  InterruptService handler(sys, cfg.interrupt_latency, cfg.programmer);
  auto& kernel = sys.sim();
  while (!sys.finished() && kernel.cycle() < cfg.max_cycles) {
    kernel.step();
    handler.after_cycle();
  }
  rep.cycles = kernel.cycle();
  rep.complete = sys.finished();
  rep.stability_violations = kernel.stability_violations().size();

  for (std::size_t i = 0; i < sys.num_managers(); ++i) {
    auto m = measure(sys.manager(i), cfg.warmup_txns, rep.cycles);
    if (baselines && m.runtime) {
      auto it = baselines->find(m.name);
      if (it != baselines->end() && *m.runtime > 0)
        m.frac_isolated = static_cast<double>(it->second) / static_cast<double>(*m.runtime);
    }
    rep.managers.push_back(std::move(m));
  }

  for (std::size_t i = 0; i < sys.num_managers() && sys.irealm(i); ++i) {
    const auto* u = sys.irealm(i);
    for (std::size_t r = 0; r < u->regions().size(); ++r) {
      const auto& p = u->probes(r);
      rep.regions.push_back({System::irealm_prefix(i), r, r == u->regions().default_region(), p.beats_forwarded,
                             p.bytes_forwarded, p.mean_latency()});
    }
  }

  for (std::size_t j = 0; j < sys.num_subordinates() && sys.erealm(j); ++j) {
    const auto* u = sys.erealm(j);
    const auto injected = sys.memory(j).fault_cycle();
    for (const auto& f : u->faults()) {
      FaultEvent ev;
      ev.unit = System::erealm_prefix(j);
      ev.record = f;
      if (injected && *injected <= f.cycle) ev.injected = injected;
      ev.irq = first_at_or_after(handler.irqs(j), f.cycle);
      ev.reset = first_at_or_after(u->reset_cycles(), f.cycle);
      ev.notified = first_at_or_after(handler.notified(j), f.cycle);
      rep.faults.push_back(ev);
    }
  }

  if (keep_trace) {
    out.trace.reserve(kernel.trace().size());
    for (const auto& r : kernel.trace())
      out.trace.push_back(protocol::format_trace_line(r.cycle, kernel.link(r.link).name, r.beat));
  }
  return out;
}

MetricsReport run_scenario(const ScenarioConfig& cfg, bool keep_trace, std::vector<std::string>* trace) {
  const auto base = isolated_baselines(cfg);
  auto out = run_point(cfg, std::nullopt, &base, keep_trace);
  if (trace) *trace = std::move(out.trace);
  return std::move(out.report);
}

std::vector<MetricsReport> run_sweep(const ScenarioConfig& cfg, unsigned threads) {
  cfg.validate();
  if (cfg.sweep.axis == SweepAxis::None) return {run_scenario(cfg)};
  const auto base = isolated_baselines(cfg);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto& values = cfg.sweep.values;
  std::vector<MetricsReport> out(values.size());
  // Each point owns its System; only the baselines are shared, read-only.
  for (std::size_t first = 0; first < values.size(); first += threads) {
    std::vector<std::future<RunOutput>> jobs;
    const auto last = std::min<std::size_t>(values.size(), first + threads);
    for (std::size_t k = first; k < last; ++k)
      jobs.push_back(std::async(std::launch::async, [&cfg, &base, v = values[k]] { return run_point(cfg, v, &base); }));
    for (std::size_t k = first; k < last; ++k) out[k] = std::move(jobs[k - first].get().report);
  }
  return out;
}

namespace {

std::vector<MetricsReport> sweep_on(ScenarioConfig cfg, SweepAxis axis, const std::vector<double>& values) {
  cfg.sweep.axis = axis;
  cfg.sweep.values = values;
  return run_sweep(cfg);
}

}  // namespace

std::vector<MetricsReport> sweep_fragmentation(ScenarioConfig cfg, const std::vector<double>& g_list) {
  return sweep_on(std::move(cfg), SweepAxis::Fragmentation, g_list);
}

std::vector<MetricsReport> sweep_budget(ScenarioConfig cfg, const std::vector<double>& ratios) {
  return sweep_on(std::move(cfg), SweepAxis::BudgetRatio, ratios);
}

std::vector<MetricsReport> sweep_period(ScenarioConfig cfg, const std::vector<double>& periods) {
  return sweep_on(std::move(cfg), SweepAxis::Period, periods);
}

std::optional<Cycle> FaultTimeline::detection_latency() const {
  if (events.empty()) return std::nullopt;
  const auto& e = events.front();
  const Cycle from = e.injected.value_or(e.record.stage_start);
  return e.record.cycle - from;
}

std::optional<Cycle> FaultTimeline::reset_latency() const {
  if (events.empty() || !events.front().reset) return std::nullopt;
  return *events.front().reset - events.front().record.cycle;
}

std::optional<Cycle> FaultTimeline::notify_latency() const {
  if (events.empty() || !events.front().notified) return std::nullopt;
  const auto& e = events.front();
  return *e.notified - e.injected.value_or(e.record.stage_start);
}

FaultTimeline fault_scenario(const ScenarioConfig& cfg) {
  auto rep = run_point(cfg, std::nullopt, nullptr).report;
  return {std::move(rep.faults), rep.complete};
}

}  // namespace realm::harness
