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

#include "realm/interconnect/arbiter.hpp"
#include "realm/interconnect/crossbar.hpp"
#include "realm/platform/manager.hpp"
#include "realm/platform/memory.hpp"
#include "realm/protocol/ordering.hpp"

namespace realm::interconnect {
namespace {

using protocol::Cycle;

TEST(RrArbiter, GrantsFirstAtOrAfterPointer) {
  RrArbiter a(3);
  EXPECT_EQ(a.arbitrate({true, true, true}), 0u);
  EXPECT_EQ(a.pointer(), 1u);
}

TEST(RrArbiter, WrapsPointerPastLastIndex) {
  RrArbiter a(3);
  EXPECT_EQ(a.arbitrate({false, false, true}), 2u);
  EXPECT_EQ(a.pointer(), 0u);
}

TEST(RrArbiter, AlternatesEvenlyBetweenTwoRequesters) {
  RrArbiter a(2);
  int grants[2] = {0, 0};
  std::size_t prev = 1;
  for (int i = 0; i < 1000; ++i) {
    auto g = *a.arbitrate({true, true});
    EXPECT_NE(g, prev);
    prev = g;
    ++grants[g];
  }
  EXPECT_EQ(grants[0], 500);
  EXPECT_EQ(grants[1], 500);
}

TEST(RrArbiter, NoRequestNoGrant) {
  RrArbiter a(4);
  EXPECT_FALSE(a.arbitrate({false, false, false, false}).has_value());
  EXPECT_EQ(a.pointer(), 0u);
}

TEST(AddrMap, HalfOpenRanges) {
  AddrMap map({{0x0, 0x1000, 0}, {0x1000, 0x2000, 1}}, 2);
  EXPECT_EQ(map.route(0x0), 0u);
  EXPECT_EQ(map.route(0xff8), 0u);
  EXPECT_EQ(map.route(0x1000), 1u);
  EXPECT_FALSE(map.route(0x2000).has_value());
}

TEST(AddrMap, ExhaustiveDecodeAgainstOracle) {
  std::vector<AddrRange> ranges{{0x100, 0x200, 0}, {0x300, 0x380, 1}, {0x380, 0x400, 2}};
  AddrMap map(ranges, 3);
  for (Addr a = 0; a < 0x500; a += 8) {
    std::optional<std::size_t> want;
    for (const auto& r : ranges)
      if (a >= r.base && a < r.limit) want = r.subordinate;
    EXPECT_EQ(map.route(a), want) << a;
  }
}

TEST(AddrMap, RejectsOverlapAndBadTargets) {
  EXPECT_THROW(AddrMap({{0, 0x100, 0}, {0x80, 0x200, 1}}, 2), sim::ConfigError);
  EXPECT_THROW(AddrMap({{0, 0x100, 3}}, 2), sim::ConfigError);
  EXPECT_THROW(AddrMap({{0x100, 0x100, 0}}, 1), sim::ConfigError);
}

using platform::Manager;
using platform::ManagerKind;
using platform::ManagerSpec;
using platform::Memory;
using platform::SubordinateSpec;
using platform::Traffic;

ManagerSpec stream(std::string name, Traffic t, std::uint16_t len, std::uint64_t bytes, Addr base) {
  ManagerSpec m;
  m.name = std::move(name);
  m.kind = ManagerKind::DmaBurst;
  m.traffic = t;
  m.txn_len_beats = len;
  m.total_bytes = bytes;
  m.src = {base, 0x4000};
  m.dst = {base, 0x4000};
  return m;
}

struct Bench {
  sim::Simulator sim;
  Crossbar* xbar = nullptr;
  std::vector<Manager*> mgrs;
  std::vector<Memory*> mems;

  Bench(std::vector<ManagerSpec> specs, std::vector<SubordinateSpec> subs, std::vector<AddrRange> map) {
    XbarConfig cfg{specs.size(), subs.size(), std::move(map)};
    for (std::size_t i = 0; i < specs.size(); ++i)
      mgrs.push_back(&sim.add<Manager>(specs[i], static_cast<std::uint32_t>(i)));
    xbar = &sim.add<Crossbar>("xbar", cfg);
    for (auto& s : subs) mems.push_back(&sim.add<Memory>(s));
    for (std::size_t i = 0; i < mgrs.size(); ++i)
      sim.connect(mgrs[i]->port(), xbar->manager_port(i), "m" + std::to_string(i));
    for (std::size_t j = 0; j < mems.size(); ++j)
      sim.connect(xbar->subordinate_port(j), mems[j]->port(), "s" + std::to_string(j));
  }
  bool all_done() const {
    for (auto* m : mgrs)
      if (!m->unbounded() && !m->done()) return false;
    return true;
  }
  std::vector<ChannelBeat> port_trace(const std::string& link) const {
    std::vector<ChannelBeat> out;
    for (const auto& t : sim.trace())
      if (sim.link(t.link).name == link) out.push_back(t.beat);
    return out;
  }
};

TEST(Crossbar, UnmappedReadGetsDecerrWithFullBurstShape) {
  Bench b({stream("m", Traffic::Read, 2, 16, 0x90000)}, {SubordinateSpec{.name = "mem"}}, {{0x0, 0x10000, 0}});
  ASSERT_EQ(b.sim.run_until([&] { return b.all_done(); }, 200).status, sim::RunStatus::Completed);
  std::vector<ChannelBeat> r;
  for (const auto& beat : b.port_trace("m0"))
    if (beat.channel == Channel::R) r.push_back(beat);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].resp, protocol::Resp::DecErr);
  EXPECT_FALSE(r[0].is_last);
  EXPECT_EQ(r[1].resp, protocol::Resp::DecErr);
  EXPECT_TRUE(r[1].is_last);
  EXPECT_EQ(b.mems[0]->accepted(), 0u);
}

TEST(Crossbar, UnmappedWriteAbsorbsDataThenAnswersDecerr) {
  Bench b({stream("m", Traffic::Write, 4, 32, 0x90000)}, {SubordinateSpec{.name = "mem"}}, {{0x0, 0x10000, 0}});
  ASSERT_EQ(b.sim.run_until([&] { return b.all_done(); }, 200).status, sim::RunStatus::Completed);
  ASSERT_EQ(b.mgrs[0]->completed().size(), 1u);
  EXPECT_EQ(b.mgrs[0]->completed()[0].resp, protocol::Resp::DecErr);
  EXPECT_TRUE(protocol::check_ordering(b.port_trace("m0")).empty());
}

TEST(Crossbar, SlowWriterHoldsWriteChannelReservation) {
  ManagerSpec slow = stream("slow", Traffic::Write, 1, 8, 0x0);
  slow.w_first_delay = 10;
  ManagerSpec fast = stream("fast", Traffic::Write, 1, 8, 0x100);
  fast.start_cycle = 1;
  Bench b({slow, fast}, {SubordinateSpec{.name = "mem", .queue_capacity = 4}}, {{0x0, 0x10000, 0}});
  ASSERT_EQ(b.sim.run_until([&] { return b.all_done(); }, 200).status, sim::RunStatus::Completed);
  Cycle slow_aw = 0, slow_w = 0, fast_aw = 0, fast_w = 0;
  for (const auto& t : b.sim.trace()) {
    if (b.sim.link(t.link).name != "s0") continue;
    if (t.beat.channel == Channel::AW) (t.beat.manager == 0 ? slow_aw : fast_aw) = t.cycle;
    if (t.beat.channel == Channel::W) (t.beat.manager == 0 ? slow_w : fast_w) = t.cycle;
  }
  EXPECT_EQ(slow_w, slow_aw + 10);
  // the fast writer's data waits for the slow writer's last beat
  EXPECT_GT(fast_w, slow_w);
  EXPECT_GT(fast_aw, slow_w);
  EXPECT_GE(fast_w - b.mgrs[1]->completed()[0].txn.issue_cycle, 10u);
}

TEST(Crossbar, BackToBackSingleBeatWritersAlternate) {
  Bench b({stream("a", Traffic::Write, 1, 8 * 50, 0x0), stream("b", Traffic::Write, 1, 8 * 50, 0x8000)},
          {SubordinateSpec{.name = "mem", .fixed_latency = 2}}, {{0x0, 0x10000, 0}});
  for (auto* m : b.mgrs) ASSERT_EQ(m->spec().max_outstanding_writes, 4u);
  ASSERT_EQ(b.sim.run_until([&] { return b.all_done(); }, 5000).status, sim::RunStatus::Completed);
  std::vector<std::uint32_t> order;
  for (const auto& t : b.sim.trace())
    if (b.sim.link(t.link).name == "s0" && t.beat.channel == Channel::AW) order.push_back(t.beat.manager);
  ASSERT_EQ(order.size(), 100u);
  for (std::size_t i = 1; i < order.size(); ++i) EXPECT_NE(order[i], order[i - 1]) << i;
}

TEST(Crossbar, BurstInterferenceSetsCoreLatencyToLatencyPlusBurst) {
  ManagerSpec core = stream("core", Traffic::Read, 1, 8 * 40, 0x0);
  core.kind = ManagerKind::CoreCopy;
  core.start_cycle = 300;
  ManagerSpec dma = stream("dma", Traffic::Read, 256, 0, 0x8000);
  Bench b({core, dma}, {SubordinateSpec{.name = "spm", .fixed_latency = 11, .queue_capacity = 1}},
          {{0x0, 0x10000, 0}});
  ASSERT_EQ(b.sim.run_until([&] { return b.mgrs[0]->done(); }, 100000).status, sim::RunStatus::Completed);
  const auto& recs = b.mgrs[0]->completed();
  for (std::size_t i = 2; i < recs.size(); ++i) EXPECT_EQ(recs[i].latency(), 11u + 255u) << i;
}

TEST(Crossbar, StarvationBoundUnderBurstTraffic) {
  // three managers with 16-beat bursts: a manager waits at most two others' bursts
  std::vector<ManagerSpec> specs;
  for (int i = 0; i < 3; ++i) specs.push_back(stream("m" + std::to_string(i), Traffic::Read, 16, 16 * 8 * 20, 0x1000 * i));
  Bench b(specs, {SubordinateSpec{.name = "mem", .fixed_latency = 4, .queue_capacity = 1}}, {{0x0, 0x10000, 0}});
  ASSERT_EQ(b.sim.run_until([&] { return b.all_done(); }, 100000).status, sim::RunStatus::Completed);
  for (auto* m : b.mgrs) {
    const auto& recs = m->completed();
    for (std::size_t i = 1; i < recs.size(); ++i) {
      const Cycle wait = recs[i].accepted - recs[i].txn.issue_cycle;
      EXPECT_LE(wait, 2u * (16 + 4)) << m->name();
    }
  }
}

TEST(Crossbar, RandomTrafficKeepsOrderingRulesOnEveryPort) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::vector<ManagerSpec> specs;
    for (int i = 0; i < 3; ++i) {
      ManagerSpec s;
      s.name = "r" + std::to_string(i);
      s.kind = ManagerKind::Random;
      s.max_outstanding_reads = 4;
      s.max_outstanding_writes = 4;
      s.random.txns = 30;
      s.random.max_len = 8;
      s.random.windows = {{0x0, 0x1000}, {0x1000, 0x1000}, {0x9000, 0x100}};
      specs.push_back(s);
    }
    sim::Simulator sim;
    XbarConfig cfg{3, 2, {{0x0, 0x1000, 0}, {0x1000, 0x2000, 1}}};
    std::vector<Manager*> mgrs;
    for (std::size_t i = 0; i < 3; ++i) mgrs.push_back(&sim.add<Manager>(specs[i], i, seed * 10 + i));
    auto& xbar = sim.add<Crossbar>("xbar", cfg);
    auto& s0 = sim.add<Memory>(SubordinateSpec{.name = "s0", .fixed_latency = 3});
    auto& s1 = sim.add<Memory>(SubordinateSpec{.name = "s1", .fixed_latency = 7});
    for (std::size_t i = 0; i < 3; ++i) sim.connect(mgrs[i]->port(), xbar.manager_port(i), "m" + std::to_string(i));
    sim.connect(xbar.subordinate_port(0), s0.port(), "s0");
    sim.connect(xbar.subordinate_port(1), s1.port(), "s1");
    auto done = [&] {
      for (auto* m : mgrs)
        if (!m->done()) return false;
      return true;
    };
    ASSERT_EQ(sim.run_until(done, 100000).status, sim::RunStatus::Completed) << seed;
    EXPECT_TRUE(sim.stability_violations().empty());
    for (int i = 0; i < 3; ++i) {
      std::vector<ChannelBeat> port;
      const std::string name = "m" + std::to_string(i);
      for (const auto& t : sim.trace())
        if (sim.link(t.link).name == name) port.push_back(t.beat);
      EXPECT_TRUE(protocol::check_ordering(port).empty()) << "seed " << seed << " port " << i;
    }
  }
}

}  // namespace
}  // namespace realm::interconnect
