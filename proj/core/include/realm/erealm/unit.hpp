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


#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "realm/erealm/dotq.hpp"
#include "realm/sim/simulator.hpp"

namespace realm::erealm {

using protocol::Resp;

enum class FaultCause : std::uint8_t { Timeout, TidMismatch, SuperfluousHandshake, Protocol };

std::string_view to_string(FaultCause c);

struct FaultRecord {
  FaultCause cause = FaultCause::Timeout;
  Direction direction = Direction::Read;
  std::uint32_t ext_tid = 0;
  std::optional<unsigned> slot;  // absent when the TID was never mapped
  Addr addr = 0;
  std::optional<Stage> stage;
  Cycle stage_start = 0;
  Cycle cycle = 0;
};

struct UnitConfig {
  bool enable = false;
  bool auto_reset = true;
  // Cycles from detection to the subordinate reset pulse (1 or 2).
  unsigned reset_latency = 1;
  unsigned num_slots = 4;
  unsigned per_tid = 4;
  StageBudgets budgets{};
};

// Egress guard in front of one subordinate. Without a fault it is a set of
// wires that tracks every transaction stage by stage; on a fault it cuts the
// subordinate off, completes what was in flight with SLVERR, answers new
// requests with DECERR until cleared, and pulses the subordinate's reset.
class Unit : public sim::Component {
 public:
  Unit(std::string name, UnitConfig cfg);

  sim::SubordinatePorts& upstream() { return up_; }
  sim::ManagerPorts& downstream() { return down_; }

  // Reset line toward the subordinate. The unit must be added to the
  // simulator before the subordinate so a pulse lands in the same cycle.
  void on_reset(std::function<void()> fn) { reset_line_ = std::move(fn); }

  // Register-level controls, applied at the next cycle boundary. Enabling or
  // disabling waits for traffic through the unit to drain.
  void configure(UnitConfig cfg);
  void clear_fault() { want_clear_ = true; }
  void command_reset() { want_reset_ = true; }

  const UnitConfig& config() const { return cfg_; }
  bool enabled() const { return enabled_; }
  bool irq() const { return irq_; }
  bool in_recovery() const { return recovery_; }
  const std::vector<FaultRecord>& faults() const { return log_; }
  // Pops the oldest unread record.
  std::optional<FaultRecord> read_fault();
  std::optional<Cycle> irq_cycle() const { return irq_cycle_; }
  const std::vector<Cycle>& reset_cycles() const { return reset_cycles_; }
  std::size_t tracked() const { return reads_.size() + writes_.size(); }
  std::size_t max_tracked() const { return max_tracked_; }
  std::size_t capacity() const { return reads_.capacity(); }
  const Dotq& read_queue() const { return reads_; }
  const Dotq& write_queue() const { return writes_; }
  std::uint64_t synthesized_beats() const { return synthesized_; }
  void record_stages(bool on) {
    reads_.record(on);
    writes_.record(on);
  }

  void evaluate(Cycle now) override;
  void commit(Cycle now) override;

 private:
  struct Owed {
    TxnRef ref;
    std::uint32_t tid;
    std::uint32_t manager;
    std::uint16_t len;
    std::uint16_t next;  // R: next beat index; W: beats still to absorb
    Resp resp;
  };

  static std::uint32_t ext_of(const protocol::ChannelBeat& b);
  void validate(const UnitConfig& c) const;
  bool drained() const;

  void eval_wires();
  void eval_tracking();
  void eval_recovery();
  void commit_wires();
  void commit_tracking(Cycle now);
  void commit_recovery(Cycle now);
  void commit_ax(sim::InPort& up, sim::OutPort& down, Dotq& q, int& pending, Stage after, Cycle now);

  // R/B checks shared by evaluate and commit.
  std::optional<FaultRecord> check_r(const protocol::ChannelBeat& b) const;
  std::optional<FaultRecord> check_b(const protocol::ChannelBeat& b) const;
  void raise(FaultRecord f, Cycle recovery_from);
  void enter_recovery(Cycle now);
  protocol::ChannelBeat owed_r_beat(const Owed& o) const;
  protocol::ChannelBeat owed_b_beat(const Owed& o) const;

  UnitConfig cfg_;
  std::optional<UnitConfig> pending_cfg_;
  sim::SubordinatePorts up_;
  sim::ManagerPorts down_;
  std::function<void()> reset_line_;

  bool enabled_;
  Dotq reads_;
  Dotq writes_;
  int ar_pending_ = -1;  // LD entry of an AR presented but not yet accepted
  int aw_pending_ = -1;
  std::size_t max_tracked_ = 0;

  // pass-through accounting while disabled, to find a drain point
  unsigned pass_reads_ = 0;
  unsigned pass_writes_ = 0;
  std::int64_t pass_w_owed_ = 0;
  bool ar_out_ = false;  // presented downstream, not yet accepted
  bool aw_out_ = false;
  bool w_out_ = false;

  // fault state
  std::vector<FaultRecord> log_;
  std::size_t read_pos_ = 0;
  bool recovery_ = false;
  Cycle recovery_from_ = 0;
  Cycle detected_ = 0;
  bool irq_ = false;
  bool irq_due_ = false;
  std::optional<Cycle> irq_cycle_;
  bool reset_due_ = false;
  std::vector<Cycle> reset_cycles_;
  bool want_clear_ = false;
  bool want_reset_ = false;
  std::deque<Owed> owed_r_;
  std::deque<Owed> owed_w_;  // W absorption and B in acceptance order
  std::optional<protocol::ChannelBeat> r_hold_;  // beat that was pending upstream
  std::optional<protocol::ChannelBeat> b_hold_;
  std::uint64_t synthesized_ = 0;
};

}  // namespace realm::erealm
