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

#include <gtest/gtest.h>

#include "realm/platform/manager.hpp"
#include "realm/platform/memory.hpp"
#include "realm/protocol/ordering.hpp"

namespace realm::platform {
namespace {

using protocol::Channel;

ManagerSpec reader(std::uint16_t len, std::uint64_t bytes) {
  ManagerSpec m;
  m.name = "core";
  m.kind = ManagerKind::CoreCopy;
  m.traffic = Traffic::Read;
  m.txn_len_beats = len;
  m.total_bytes = bytes;
  m.src = {0x0, 0x10000};
  return m;
}

TEST(Memory, IsolatedReadLatencyEqualsFixedLatency) {
  sim::Simulator sim;
  auto& mgr = sim.add<Manager>(reader(1, 8 * 4), 0);
  auto& mem = sim.add<Memory>(SubordinateSpec{.name = "spm", .fixed_latency = 11});
  sim.connect(mgr.port(), mem.port(), "m0");
  ASSERT_EQ(sim.run_until([&] { return mgr.done(); }, 1000).status, sim::RunStatus::Completed);
  ASSERT_EQ(mgr.completed().size(), 4u);
  for (const auto& r : mgr.completed()) EXPECT_EQ(r.latency(), 11u);
  // dependent reads: the next one is presented the cycle after completion
  EXPECT_EQ(mgr.completed()[1].accepted, mgr.completed()[0].completed + 1);
}

TEST(Memory, ReadBurstBeatsAreBackToBack) {
  sim::Simulator sim;
  auto& mgr = sim.add<Manager>(reader(4, 32), 0);
  auto& mem = sim.add<Memory>(SubordinateSpec{.name = "mem", .fixed_latency = 5});
  sim.connect(mgr.port(), mem.port(), "m0");
  sim.run_until([&] { return mgr.done(); }, 1000);
  std::vector<Cycle> r;
  Cycle ar = 0;
  for (const auto& t : sim.trace()) {
    if (t.beat.channel == Channel::AR) ar = t.cycle;
    if (t.beat.channel == Channel::R) r.push_back(t.cycle);
  }
  EXPECT_EQ(r, (std::vector<Cycle>{ar + 5, ar + 6, ar + 7, ar + 8}));
}

TEST(Memory, SingleBeatWriteCompletesAfterFixedLatency) {
  sim::Simulator sim;
  ManagerSpec s = reader(1, 8);
  s.traffic = Traffic::Write;
  s.dst = {0x0, 0x1000};
  auto& mgr = sim.add<Manager>(s, 0);
  auto& mem = sim.add<Memory>(SubordinateSpec{.name = "mem", .fixed_latency = 11});
  sim.connect(mgr.port(), mem.port(), "m0");
  sim.run_until([&] { return mgr.done(); }, 1000);
  ASSERT_EQ(mgr.completed().size(), 1u);
  EXPECT_EQ(mgr.completed()[0].latency(), 11u);
}

TEST(Memory, StallForeverAfterFirstBeatGoesSilent) {
  sim::Simulator sim;
  auto& mgr = sim.add<Manager>(reader(4, 32), 0);
  SubordinateSpec ss{.name = "mem", .fixed_latency = 5};
  ss.fault = FaultInjection{.after_beats = 1};
  auto& mem = sim.add<Memory>(ss);
  sim.connect(mgr.port(), mem.port(), "m0");
  EXPECT_EQ(sim.run_until([&] { return mgr.done(); }, 500).status, sim::RunStatus::Timeout);
  int r = 0;
  Cycle first = 0;
  for (const auto& t : sim.trace())
    if (t.beat.channel == Channel::R && r++ == 0) first = t.cycle;
  EXPECT_EQ(r, 1);
  ASSERT_TRUE(mem.fault_cycle().has_value());
  EXPECT_EQ(*mem.fault_cycle(), first + 1);
}

TEST(Memory, WrongTidResponseCarriesUnissuedTid) {
  sim::Simulator sim;
  auto& mgr = sim.add<Manager>(reader(1, 8), 0);
  SubordinateSpec ss{.name = "mem", .fixed_latency = 3};
  ss.fault = FaultInjection{.after_beats = 0, .behavior = FaultInjection::Behavior::WrongTidResponse};
  auto& mem = sim.add<Memory>(ss);
  sim.connect(mgr.port(), mem.port(), "m0");
  sim.run_until([&] { return mgr.done(); }, 100);
  bool seen = false;
  for (const auto& t : sim.trace())
    if (t.beat.channel == Channel::R) seen = t.beat.tid->value() != 0;
  EXPECT_TRUE(seen);
}

TEST(Memory, ResetPulseDropsOutstandingWork) {
  sim::Simulator sim;
  auto& mgr = sim.add<Manager>(reader(4, 32), 0);
  SubordinateSpec ss{.name = "mem", .fixed_latency = 5};
  ss.fault = FaultInjection{.after_beats = 1};
  auto& mem = sim.add<Memory>(ss);
  sim.connect(mgr.port(), mem.port(), "m0");
  for (int i = 0; i < 30; ++i) sim.step();
  EXPECT_FALSE(mem.idle());
  mem.reset_pulse();
  sim.step();
  EXPECT_TRUE(mem.idle());
  EXPECT_EQ(mem.resets(), 1u);
  EXPECT_TRUE(sim.stability_violations().empty());
}

TEST(Memory, RejectsUnsupportedServiceRate) {
  EXPECT_THROW(Memory(SubordinateSpec{.beats_per_cycle = 2}), sim::ConfigError);
  EXPECT_THROW(Memory(SubordinateSpec{.fixed_latency = 0}), sim::ConfigError);
}

TEST(Manager, CoreCopyOfOneKibIssues128ReadsAnd128Writes) {
  sim::Simulator sim;
  ManagerSpec s = reader(1, 1024);
  s.traffic = Traffic::Copy;
  s.dst = {0x10000, 0x10000};
  auto& mgr = sim.add<Manager>(s, 0);
  auto& mem = sim.add<Memory>(SubordinateSpec{.name = "mem", .fixed_latency = 11, .queue_capacity = 8});
  sim.connect(mgr.port(), mem.port(), "m0");
  ASSERT_EQ(sim.run_until([&] { return mgr.done(); }, 100000).status, sim::RunStatus::Completed);
  int reads = 0, writes = 0;
  for (const auto& r : mgr.completed()) (r.txn.is_read() ? reads : writes)++;
  EXPECT_EQ(reads, 128);
  EXPECT_EQ(writes, 128);
  EXPECT_EQ(mgr.bytes_completed(), 2048u);
}

TEST(Manager, DmaBurstAddressesAreContiguous) {
  sim::Simulator sim;
  ManagerSpec s = reader(256, 3 * 2048);
  s.kind = ManagerKind::DmaBurst;
  s.src = {0x0, 0x100000};
  auto& mgr = sim.add<Manager>(s, 0);
  auto& mem = sim.add<Memory>(SubordinateSpec{.name = "mem"});
  sim.connect(mgr.port(), mem.port(), "m0");
  sim.run_until([&] { return mgr.done(); }, 10000);
  ASSERT_EQ(mgr.completed().size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(mgr.completed()[i].txn.addr, i * 2048);
    EXPECT_EQ(mgr.completed()[i].txn.len_beats, 256);
  }
}

TEST(Manager, PeriodicScheduleIssuesExactBytesPerWindow) {
  sim::Simulator sim;
  ManagerSpec s = reader(4, 0);
  s.kind = ManagerKind::Periodic;
  s.bytes_per_activation = 800;
  s.activation_period = 200;
  s.activations = 3;
  s.max_outstanding_reads = 4;
  auto& mgr = sim.add<Manager>(s, 0);
  auto& mem = sim.add<Memory>(SubordinateSpec{.name = "mem"});
  sim.connect(mgr.port(), mem.port(), "m0");
  sim.run_until([&] { return mgr.done(); }, 10000);
  ASSERT_EQ(mgr.activations().size(), 3u);
  for (const auto& a : mgr.activations()) {
    EXPECT_TRUE(a.complete);
    EXPECT_EQ(a.bytes_in_window, 800u);
    EXPECT_EQ(a.deficit, 0u);
  }
  EXPECT_EQ(mgr.beats_completed(), 300u);
}

TEST(Manager, PeriodicDeficitIsReportedUnderBackpressure) {
  sim::Simulator sim;
  ManagerSpec s = reader(4, 0);
  s.kind = ManagerKind::Periodic;
  s.bytes_per_activation = 800;
  s.activation_period = 50;  // 100 beats cannot move in 50 cycles
  s.activations = 2;
  s.max_outstanding_reads = 4;
  auto& mgr = sim.add<Manager>(s, 0);
  auto& mem = sim.add<Memory>(SubordinateSpec{.name = "mem"});
  sim.connect(mgr.port(), mem.port(), "m0");
  sim.run_until([&] { return mgr.done(); }, 10000);
  EXPECT_GT(mgr.activations()[0].deficit, 0u);
  EXPECT_EQ(mgr.activations()[0].deficit + mgr.activations()[0].bytes_in_window, 800u);
}

TEST(Manager, RandomTrafficIsSeedDeterministic) {
  auto run = [](std::uint64_t seed) {
    sim::Simulator sim;
    ManagerSpec s;
    s.kind = ManagerKind::Random;
    s.src = {0, 0x4000};
    s.max_outstanding_reads = 4;
    s.random.txns = 40;
    auto& mgr = sim.add<Manager>(s, 0, seed);
    auto& mem = sim.add<Memory>(SubordinateSpec{.name = "mem"});
    sim.connect(mgr.port(), mem.port(), "m0");
    sim.run_until([&] { return mgr.done(); }, 100000);
    std::vector<protocol::ChannelBeat> out;
    for (const auto& t : sim.trace()) out.push_back(t.beat);
    return out;
  };
  EXPECT_EQ(run(7), run(7));
  EXPECT_NE(run(7), run(8));
}

}  // namespace
}  // namespace realm::platform
