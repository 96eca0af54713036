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


#include <algorithm>
#include <functional>

#include <fmt/format.h>

#include "realm/harness/scenario.hpp"

namespace realm::harness {

using platform::FaultInjection;
using platform::ManagerKind;
using platform::ManagerSpec;
using platform::SubordinateSlot;
using platform::SubordinateSpec;
using platform::Traffic;

namespace {

constexpr protocol::Addr kSpmBase = 0x0;
constexpr protocol::Addr kL2Base = 0x100000;
constexpr protocol::Addr kWindow = 0x10000;

// Scratchpad with an 11-cycle access path. Each transaction holds the port
// for at least two cycles, which is what makes beat-level interleaving
// between two managers cost the core about half of its bandwidth.
SubordinateSlot spm() {
  SubordinateSpec s;
  s.name = "spm";
  s.fixed_latency = 11;
  s.queue_capacity = 1;
  s.min_occupancy = 2;
  return {s, kSpmBase, kWindow};
}

SubordinateSlot l2() {
  SubordinateSpec s;
  s.name = "l2";
  s.fixed_latency = 11;
  return {s, kL2Base, kWindow};
}

// 1 KiB memcpy, one word at a time, from the scratchpad into L2.
ManagerSpec core_copy() {
  ManagerSpec m;
  m.name = "core";
  m.kind = ManagerKind::CoreCopy;
  m.traffic = Traffic::Copy;
  m.total_bytes = 1024;
  m.src = {kSpmBase, 0x4000};
  m.dst = {kL2Base, 0x4000};
  return m;
}

// Endless 256-beat bursts inside the scratchpad.
ManagerSpec dma(Traffic t) {
  ManagerSpec m;
  m.name = "dma";
  m.kind = ManagerKind::DmaBurst;
  m.traffic = t;
  m.txn_len_beats = 256;
  m.total_bytes = 0;
  m.src = {kSpmBase + 0x8000, 0x4000};
  m.dst = {kSpmBase + 0xc000, 0x4000};
  m.max_outstanding_reads = 4;
  m.max_outstanding_writes = 4;
  m.tid = 1;
  return m;
}

ScenarioConfig interference(std::string name, Traffic dma_traffic) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.system.managers = {core_copy(), dma(dma_traffic)};
  c.system.subordinates = {spm(), l2()};
  c.critical = "core";
  c.max_cycles = 400'000;
  return c;
}

ScenarioConfig dma_latency() {
  auto c = interference("dma_latency", Traffic::Read);
  c.description = "core memcpy against an endless 256-beat read DMA; unregulated vs single-beat fragmentation";
  c.sweep.axis = SweepAxis::Fragmentation;
  c.sweep.values = {0, 1};
  return c;
}

ScenarioConfig frag_sweep() {
  auto c = interference("frag_sweep", Traffic::Copy);
  c.description = "core memcpy against a copying 256-beat DMA; fragmentation granularity sweep (0 = unregulated)";
  c.sweep.axis = SweepAxis::Fragmentation;
  c.sweep.values = {0, 1, 4, 16, 64, 256};
  return c;
}

ScenarioConfig budget_sweep() {
  auto c = interference("budget_sweep", Traffic::Copy);
  c.description = "single-beat fragmentation with the scratchpad budget split between core and DMA by ratio";
  for (std::size_t i = 0; i < c.system.managers.size(); ++i) {
    const auto p = platform::System::irealm_prefix(i) + ".";
    c.registers.emplace_back(p + "bypass", 0);
    c.registers.emplace_back(p + "default_fragment", 1);
    c.registers.emplace_back(p + "r0.base", kSpmBase);
    c.registers.emplace_back(p + "r0.limit", kSpmBase + kWindow);
    c.registers.emplace_back(p + "r0.fragment", 1);
  }
  c.sweep.axis = SweepAxis::BudgetRatio;
  c.sweep.values = {1.0 / 16, 1.0 / 4, 1, 4, 16, 64, 256};
  c.sweep.period = 1000;
  c.sweep.total_budget = 1000;
  return c;
}

ScenarioConfig period_sweep() {
  ScenarioConfig c;
  c.name = "period_sweep";
  c.description = "periodic core (800 B every 200 cycles) and DMA (6400 B every 1600 cycles), budget = half a period";
  ManagerSpec core;
  core.name = "core";
  core.kind = ManagerKind::Periodic;
  core.traffic = Traffic::Read;
  core.txn_len_beats = 4;
  core.bytes_per_activation = 800;
  core.activation_period = 200;
  core.activations = 32;
  core.max_outstanding_reads = 4;
  core.src = {kSpmBase, 0x4000};
  ManagerSpec d;
  d.name = "dma";
  d.kind = ManagerKind::Periodic;
  d.traffic = Traffic::Read;
  d.txn_len_beats = 256;
  d.bytes_per_activation = 6400;
  d.activation_period = 1600;
  d.activations = 4;
  d.max_outstanding_reads = 4;
  d.tid = 1;
  d.src = {kL2Base, 0x8000};
  c.system.managers = {core, d};
  c.system.subordinates = {spm(), l2()};
  c.critical = "core";
  c.max_cycles = 200'000;
  const std::uint64_t frag[] = {4, 16};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto p = platform::System::irealm_prefix(i) + ".";
    c.registers.emplace_back(p + "default_fragment", frag[i]);
    c.registers.emplace_back(p + "r0.base", kSpmBase);
    c.registers.emplace_back(p + "r0.limit", kL2Base + kWindow);
    c.registers.emplace_back(p + "r0.fragment", frag[i]);
  }
  c.sweep.axis = SweepAxis::Period;
  c.sweep.values = {50, 100, 200, 400, 800, 1600};
  c.sweep.budget_fraction = 0.5;
  return c;
}

ScenarioConfig fault_base(std::string name, Traffic t, FaultInjection f) {
  ScenarioConfig c;
  c.name = std::move(name);
  ManagerSpec core;
  core.name = "core";
  core.kind = ManagerKind::CoreCopy;
  core.traffic = t;
  core.txn_len_beats = 4;
  core.total_bytes = 256;
  core.src = {kSpmBase, 0x1000};
  core.dst = {kSpmBase + 0x1000, 0x1000};
  core.retry_on_error = true;
  SubordinateSpec s;
  s.name = "periph";
  s.fixed_latency = 11;
  s.fault = f;
  c.system.managers = {core};
  c.system.subordinates = {{s, kSpmBase, kWindow}};
  c.critical = "core";
  c.max_cycles = 50'000;
  c.interrupt_latency = 100;
  // 20 cycles for every stage, 300 for a four-beat data phase.
  const std::string p = platform::System::erealm_prefix(0) + ".";
  for (const char* b : {"aw_hs", "aw_to_wvalid", "w_first_hs", "wlast_to_bvalid", "b_hs", "ar_hs", "ar_to_rvalid",
                        "r_resp"})
    c.registers.emplace_back(p + "budget." + b, 20);
  c.registers.emplace_back(p + "budget.r_per_word", 75);
  c.registers.emplace_back(p + "budget.w_per_word", 75);
  c.registers.emplace_back(p + "auto_reset", 1);
  c.registers.emplace_back(p + "reset_latency", 1);
  c.registers.emplace_back(p + "enable", 1);
  return c;
}

ScenarioConfig fault_wcdt() {
  FaultInjection f;
  f.trigger = FaultInjection::Trigger::AfterBeats;
  f.after_beats = 1;
  f.direction = protocol::Direction::Read;
  f.behavior = FaultInjection::Behavior::StallForever;
  auto c = fault_base("fault_wcdt", Traffic::Read, f);
  c.description = "subordinate stops after the first R beat; timeout, reset, interrupt and retry";
  return c;
}

ScenarioConfig fault_wrong_tid() {
  FaultInjection f;
  f.after_beats = 1;
  f.behavior = FaultInjection::Behavior::WrongTidResponse;
  auto c = fault_base("fault_wrong_tid", Traffic::Read, f);
  c.description = "subordinate answers with a TID nobody issued";
  return c;
}

ScenarioConfig fault_extra_handshake() {
  FaultInjection f;
  f.after_beats = 1;
  f.direction = protocol::Direction::Write;
  f.behavior = FaultInjection::Behavior::ExtraHandshake;
  auto c = fault_base("fault_extra_handshake", Traffic::Write, f);
  c.description = "subordinate sends a B response while write data is still arriving";
  return c;
}

struct Preset {
  std::string_view name;
  std::function<ScenarioConfig()> make;
};

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all{
      {"frag_sweep", frag_sweep},       {"budget_sweep", budget_sweep},       {"period_sweep", period_sweep},
      {"fault_wcdt", fault_wcdt},       {"dma_latency", dma_latency},         {"fault_wrong_tid", fault_wrong_tid},
      {"fault_extra_handshake", fault_extra_handshake},
  };
  return all;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : presets()) out.emplace_back(p.name);
  return out;
}

bool is_preset(std::string_view name) {
  return std::any_of(presets().begin(), presets().end(), [&](const Preset& p) { return p.name == name; });
}

ScenarioConfig preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) {
      auto c = p.make();
      c.validate();
      return c;
    }
  }
  throw sim::ConfigError(fmt::format("unknown scenario preset '{}'", name));
}

}  // namespace realm::harness
