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

#include <map>
#include <optional>

#include "realm/erealm/unit.hpp"
#include "realm/platform/manager.hpp"
#include "realm/platform/memory.hpp"
#include "realm/protocol/ordering.hpp"

namespace realm::erealm {
namespace {

using platform::FaultInjection;
using platform::Manager;
using platform::ManagerKind;
using platform::ManagerSpec;
using platform::Memory;
using platform::SubordinateSpec;
using platform::Traffic;
using protocol::Channel;
using protocol::ChannelBeat;

TEST(IdRemap, CompactsSparseIds) {
  IdRemap r(2);
  EXPECT_EQ(r.map(7), 0u);
  EXPECT_EQ(r.map(300), 1u);
  EXPECT_EQ(r.map(7), 0u);
  EXPECT_FALSE(r.map(9).has_value());
  r.release(7);
  EXPECT_EQ(r.map(9), 0u);
  EXPECT_EQ(r.lookup(300), 1u);
}

protocol::TxnDescriptor txn(std::uint32_t seq, std::uint32_t tid, std::uint16_t len,
                            Direction d = Direction::Read) {
  protocol::TxnDescriptor t;
  t.id = protocol::make_txn_ref(0, seq);
  t.tid = protocol::Tid{tid};
  t.len_beats = len;
  t.direction = d;
  return t;
}

TEST(Dotq, SameTidChainsInFifoOrder) {
  Dotq q(Direction::Read, 2, 2, StageBudgets{});
  const int a = q.insert(txn(0, 5, 1), 5, 0, 0);
  const int b = q.insert(txn(1, 5, 1), 5, 0, 0);
  EXPECT_EQ(q.head(5), a);
  EXPECT_EQ(q.at(a).next, b);
  EXPECT_FALSE(q.can_insert(5));  // 2 per TID
  EXPECT_TRUE(q.can_insert(6));
  EXPECT_EQ(q.ht(q.at(a).slot).outstanding, 2u);
  q.retire(a, 3);
  EXPECT_EQ(q.head(5), b);
  q.retire(b, 4);
  EXPECT_FALSE(q.mapped(5));
  EXPECT_EQ(q.size(), 0u);
}

TEST(Dotq, DataStageBudgetScalesWithBurstLength) {
  Dotq q(Direction::Read, 1, 1, StageBudgets::uniform(20, 1));
  const int i = q.insert(txn(0, 0, 256), 0, 0, 0);
  EXPECT_EQ(q.at(i).stage, Stage::AxHs);
  EXPECT_EQ(q.at(i).stage_budget, 20u);
  q.advance(i, Stage::RFirstToLast, 10);
  EXPECT_EQ(q.at(i).stage_budget, 256u);
}

TEST(Dotq, WaitingEntryBehindChainHeadDoesNotTime) {
  Dotq q(Direction::Read, 1, 2, StageBudgets::uniform(5, 10));
  const int a = q.insert(txn(0, 0, 4), 0, 0, 0);
  const int b = q.insert(txn(1, 0, 4), 0, 0, 0);
  q.advance(a, Stage::RFirstToLast, 1);
  q.advance(b, Stage::ArToRvalid, 1);
  EXPECT_FALSE(q.running(b));
  EXPECT_FALSE(q.expired(30).has_value());
  q.retire(a, 30);
  EXPECT_TRUE(q.running(b));
  EXPECT_EQ(q.at(b).stage_start, 31u);
  EXPECT_FALSE(q.expired(34).has_value());
  EXPECT_EQ(q.expired(35), b);
}

TEST(StageBudgets, RejectsZero) {
  StageBudgets b;
  b.r_resp = 0;
  EXPECT_THROW(b.validate(), sim::ConfigError);
  EXPECT_THROW(Unit("e", UnitConfig{.reset_latency = 3}), sim::ConfigError);
}

struct Guarded {
  sim::Simulator sim;
  Manager* mgr;
  Unit* unit = nullptr;
  Memory* mem;

  Guarded(const ManagerSpec& ms, std::optional<UnitConfig> uc, SubordinateSpec ss = {}, std::uint64_t seed = 1) {
    mgr = &sim.add<Manager>(ms, 0, seed);
    if (uc) unit = &sim.add<Unit>("erealm", *uc);
    ss.name = "mem";
    mem = &sim.add<Memory>(ss);
    if (unit) {
      sim.connect(mgr->port(), unit->upstream(), "m0");
      sim.connect(unit->downstream(), mem->port(), "s0");
      unit->on_reset([m = mem] { m->reset_pulse(); });
      unit->record_stages(true);
    } else {
      sim.connect(mgr->port(), mem->port(), "s0");
    }
  }
  bool run(Cycle cap = 100000) { return sim.run_until([&] { return mgr->done(); }, cap).status == sim::RunStatus::Completed; }
  std::vector<std::pair<Cycle, ChannelBeat>> on(const std::string& link) const {
    std::vector<std::pair<Cycle, ChannelBeat>> out;
    for (const auto& t : sim.trace())
      if (sim.link(t.link).name == link) out.emplace_back(t.cycle, t.beat);
    return out;
  }
  std::vector<ChannelBeat> beats(const std::string& link) const {
    std::vector<ChannelBeat> out;
    for (auto& [c, b] : on(link)) out.push_back(b);
    return out;
  }
};

ManagerSpec reads(std::uint16_t len, unsigned count, unsigned outstanding = 1) {
  ManagerSpec s;
  s.kind = ManagerKind::DmaBurst;
  s.traffic = Traffic::Read;
  s.txn_len_beats = len;
  s.total_bytes = std::uint64_t{len} * 8 * count;
  s.src = {0, 0x10000};
  s.max_outstanding_reads = outstanding;
  return s;
}

ManagerSpec writes(std::uint16_t len, unsigned count) {
  ManagerSpec s = reads(len, count);
  s.traffic = Traffic::Write;
  s.dst = {0, 0x10000};
  s.max_outstanding_writes = 2;
  return s;
}

ManagerSpec mixed(unsigned txns) {
  ManagerSpec s;
  s.kind = ManagerKind::Random;
  s.src = {0, 0x8000};
  s.max_outstanding_reads = 4;
  s.max_outstanding_writes = 4;
  s.random.txns = txns;
  s.random.max_len = 16;
  s.random.num_tids = 4;
  return s;
}

UnitConfig wcdt_config() {
  UnitConfig c;
  c.enable = true;
  c.budgets = StageBudgets::uniform(20, 75);
  return c;
}

TEST(Erealm, EnabledAndIdleIsTransparent) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Guarded plain(mixed(60), std::nullopt, {}, seed);
    Guarded guarded(mixed(60), UnitConfig{.enable = true}, {}, seed);
    ASSERT_TRUE(plain.run());
    ASSERT_TRUE(guarded.run());
    EXPECT_EQ(plain.on("s0"), guarded.on("s0")) << "seed " << seed;
    EXPECT_TRUE(guarded.unit->faults().empty());
    EXPECT_EQ(guarded.unit->tracked(), 0u);
  }
}

TEST(Erealm, CleanWriteWalksSixStages) {
  Guarded g(writes(1, 1), UnitConfig{.enable = true});
  ASSERT_TRUE(g.run());
  std::vector<Stage> seen;
  for (const auto& e : g.unit->write_queue().events()) seen.push_back(e.stage);
  EXPECT_EQ(seen, (std::vector<Stage>{Stage::AxHs, Stage::AwToWvalid, Stage::WFirstHs, Stage::WFirstToLast,
                                      Stage::WlastToBvalid, Stage::BHs}));
  EXPECT_EQ(g.unit->tracked(), 0u);
}

TEST(Erealm, CleanReadWalksFourStages) {
  Guarded g(reads(4, 1), UnitConfig{.enable = true});
  ASSERT_TRUE(g.run());
  std::vector<Stage> seen;
  for (const auto& e : g.unit->read_queue().events()) seen.push_back(e.stage);
  EXPECT_EQ(seen, (std::vector<Stage>{Stage::AxHs, Stage::ArToRvalid, Stage::RFirstToLast, Stage::RResp}));
}

TEST(Erealm, StalledDataStageTimesOutAtItsBudget) {
  SubordinateSpec ss;
  ss.fault = FaultInjection{.after_beats = 1};
  Guarded g(reads(4, 1), wcdt_config(), ss);
  g.run(2000);

  Cycle first_r = 0;
  for (auto& [c, b] : g.on("s0"))
    if (b.channel == Channel::R) first_r = c;
  ASSERT_EQ(g.unit->faults().size(), 1u);
  const FaultRecord& f = g.unit->faults()[0];
  EXPECT_EQ(f.cause, FaultCause::Timeout);
  EXPECT_EQ(f.stage, Stage::RFirstToLast);
  EXPECT_EQ(f.cycle, first_r + 300);
  EXPECT_LE(f.cycle - *g.mem->fault_cycle(), 300u);
  EXPECT_EQ(g.unit->irq_cycle(), f.cycle + 1);
  ASSERT_EQ(g.unit->reset_cycles().size(), 1u);
  EXPECT_EQ(g.unit->reset_cycles()[0], f.cycle + 1);
  EXPECT_EQ(g.mem->resets(), 1u);

  // three SLVERR beats complete the burst toward the manager
  std::vector<ChannelBeat> r;
  for (const auto& b : g.beats("m0"))
    if (b.channel == Channel::R) r.push_back(b);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].resp, protocol::Resp::Okay);
  for (int i = 1; i < 4; ++i) EXPECT_EQ(r[i].resp, protocol::Resp::SlvErr);
  EXPECT_TRUE(r[3].is_last);
  EXPECT_EQ(g.unit->synthesized_beats(), 3u);
  const auto m0 = g.beats("m0");
  EXPECT_TRUE(protocol::check_ordering(m0).empty());
  EXPECT_TRUE(g.sim.stability_violations().empty());
}

TEST(Erealm, ResetLatencyOfTwoCycles) {
  SubordinateSpec ss;
  ss.fault = FaultInjection{.after_beats = 1};
  UnitConfig c = wcdt_config();
  c.reset_latency = 2;
  Guarded g(reads(4, 1), c, ss);
  g.run(2000);
  ASSERT_EQ(g.unit->reset_cycles().size(), 1u);
  EXPECT_EQ(g.unit->reset_cycles()[0], g.unit->faults()[0].cycle + 2);
}

TEST(Erealm, WrongTidDetectedInTheSameCycle) {
  SubordinateSpec ss;
  ss.fault = FaultInjection{.after_beats = 1, .behavior = FaultInjection::Behavior::WrongTidResponse};
  Guarded g(reads(4, 1), wcdt_config(), ss);
  g.run(2000);
  ASSERT_EQ(g.unit->faults().size(), 1u);
  EXPECT_EQ(g.unit->faults()[0].cause, FaultCause::TidMismatch);
  EXPECT_EQ(g.unit->faults()[0].cycle, *g.mem->fault_cycle());
  // the corrupted beat never reaches the manager
  for (const auto& b : g.beats("m0"))
    if (b.channel == Channel::R) EXPECT_EQ(b.tid->value(), 0u);
  EXPECT_TRUE(protocol::check_ordering(g.beats("m0")).empty());
}

TEST(Erealm, PrematureWriteResponseIsSuperfluous) {
  SubordinateSpec ss;
  ss.fault = FaultInjection{.after_beats = 1, .direction = Direction::Write,
                            .behavior = FaultInjection::Behavior::ExtraHandshake};
  Guarded g(writes(4, 1), wcdt_config(), ss);
  g.run(2000);
  ASSERT_EQ(g.unit->faults().size(), 1u);
  const FaultRecord& f = g.unit->faults()[0];
  EXPECT_EQ(f.cause, FaultCause::SuperfluousHandshake);
  EXPECT_EQ(f.stage, Stage::WFirstToLast);
  EXPECT_EQ(f.cycle, *g.mem->fault_cycle());
  int b = 0;
  for (const auto& x : g.beats("m0"))
    if (x.channel == Channel::B) {
      ++b;
      EXPECT_EQ(x.resp, protocol::Resp::SlvErr);
    }
  EXPECT_EQ(b, 1);
  EXPECT_TRUE(protocol::check_ordering(g.beats("m0")).empty());
  EXPECT_TRUE(g.sim.stability_violations().empty());
}

TEST(Erealm, PrematureResponseBehindSameTidWriteRetiresTheOlderOne) {
  // The early B of the second write carries the ID of the first, which still
  // awaits its response, so upstream it answers the first write.
  SubordinateSpec ss;
  ss.fault = FaultInjection{.after_beats = 1, .direction = Direction::Write, .nth = 1,
                            .behavior = FaultInjection::Behavior::ExtraHandshake};
  Guarded g(writes(4, 2), wcdt_config(), ss);
  ASSERT_TRUE(g.run(2000));
  EXPECT_TRUE(protocol::check_ordering(g.beats("m0")).empty());
  // the second write's own response is left over and matches nothing
  for (int i = 0; i < 50; ++i) g.sim.step();
  ASSERT_EQ(g.unit->faults().size(), 1u);
  EXPECT_EQ(g.unit->faults()[0].cause, FaultCause::TidMismatch);
  EXPECT_TRUE(g.sim.stability_violations().empty());
}

TEST(Erealm, QueuedSameTidTimerWaitsForService) {
  // The first read stalls 100 cycles mid-burst; the second waits far longer
  // than its 20-cycle stage budget but is not being served yet.
  SubordinateSpec ss;
  ss.fault = FaultInjection{.after_beats = 1, .behavior = FaultInjection::Behavior::StallFor, .stall_cycles = 100};
  Guarded g(reads(4, 2, 2), wcdt_config(), ss);
  ASSERT_TRUE(g.run(5000));
  EXPECT_TRUE(g.unit->faults().empty());
  EXPECT_EQ(g.mgr->errors(), 0u);
}

TEST(Erealm, NewRequestsGetDecerrUntilCleared) {
  SubordinateSpec ss;
  ss.fault = FaultInjection{.after_beats = 1};
  ManagerSpec ms = reads(4, 6);
  Guarded g(ms, wcdt_config(), ss);
  g.run(3000);
  ASSERT_TRUE(g.mgr->done());
  std::map<protocol::TxnRef, protocol::Resp> resp;
  for (const auto& b : g.beats("m0"))
    if (b.channel == Channel::R && b.is_last) resp[b.txn_ref] = b.resp;
  ASSERT_EQ(resp.size(), 6u);
  auto it = resp.begin();
  EXPECT_EQ((it++)->second, protocol::Resp::SlvErr);
  for (; it != resp.end(); ++it) EXPECT_EQ(it->second, protocol::Resp::DecErr);
  EXPECT_TRUE(g.unit->in_recovery());
  EXPECT_TRUE(g.unit->irq());

  g.unit->clear_fault();
  g.sim.step();
  EXPECT_FALSE(g.unit->in_recovery());
  EXPECT_FALSE(g.unit->irq());
  EXPECT_TRUE(g.unit->read_fault().has_value());
  EXPECT_FALSE(g.unit->read_fault().has_value());
}

TEST(Erealm, RetriedTrafficCompletesAfterRecovery) {
  SubordinateSpec ss;
  ss.fault = FaultInjection{.after_beats = 2};
  ManagerSpec ms = reads(4, 8);
  ms.retry_on_error = true;
  Guarded g(ms, wcdt_config(), ss);
  g.sim.run_until([&] { return g.unit->irq(); }, 3000);
  ASSERT_TRUE(g.unit->irq());
  g.unit->clear_fault();
  // the core re-issues whatever failed once nothing is in flight
  for (int i = 0; i < 10000 && !g.mgr->done(); ++i) {
    if (g.mgr->held_retries() && g.mgr->outstanding() == 0 && !g.unit->in_recovery()) g.mgr->release_retries();
    g.sim.step();
  }
  ASSERT_TRUE(g.mgr->done()) << g.mgr->held_retries() << " held, " << g.mgr->outstanding() << " out, "
                             << g.mgr->errors() << " errors, recovery " << g.unit->in_recovery() << " cycle "
                             << g.sim.cycle();
  EXPECT_EQ(g.mgr->bytes_completed(), 8u * 4 * 8);
  EXPECT_EQ(g.unit->faults().size(), 1u);
  EXPECT_TRUE(protocol::check_ordering(g.beats("m0")).empty());
}

TEST(Erealm, ManualModeWaitsForResetCommand) {
  SubordinateSpec ss;
  ss.fault = FaultInjection{.after_beats = 1};
  UnitConfig c = wcdt_config();
  c.auto_reset = false;
  Guarded g(reads(4, 1), c, ss);
  g.run(1000);
  EXPECT_FALSE(g.unit->faults().empty());
  EXPECT_TRUE(g.unit->reset_cycles().empty());
  EXPECT_EQ(g.mem->resets(), 0u);
  g.unit->command_reset();
  g.sim.step();
  EXPECT_EQ(g.mem->resets(), 1u);
}

TEST(Erealm, CommandedResetWithoutFaultLogsNothing) {
  Guarded g(reads(1, 4), UnitConfig{.enable = true});
  ASSERT_TRUE(g.run());
  g.unit->command_reset();
  g.sim.step();
  EXPECT_EQ(g.mem->resets(), 1u);
  EXPECT_TRUE(g.unit->faults().empty());
  EXPECT_FALSE(g.unit->irq());
}

TEST(Erealm, CapacityBackpressuresWithoutFaults) {
  UnitConfig c{.enable = true, .num_slots = 1, .per_tid = 1};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Guarded g(mixed(50), c, {}, seed);
    ASSERT_TRUE(g.run());
    EXPECT_LE(g.unit->max_tracked(), 1u);
    EXPECT_TRUE(g.unit->faults().empty());
    EXPECT_TRUE(protocol::check_ordering(g.beats("m0")).empty());
    EXPECT_TRUE(g.sim.stability_violations().empty());
  }
}

TEST(Erealm, EnableWaitsForDrain) {
  Guarded g(mixed(80), UnitConfig{});
  for (int i = 0; i < 40; ++i) g.sim.step();
  g.unit->configure(UnitConfig{.enable = true});
  ASSERT_TRUE(g.run());
  EXPECT_TRUE(g.unit->enabled());
  EXPECT_TRUE(g.unit->faults().empty());
  EXPECT_TRUE(g.sim.stability_violations().empty());
  EXPECT_TRUE(protocol::check_ordering(g.beats("m0")).empty());
}

}  // namespace
}  // namespace realm::erealm
