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
#include <optional>
#include <unordered_map>
#include <vector>

#include "realm/irealm/budget.hpp"
#include "realm/irealm/fragment.hpp"
#include "realm/sim/simulator.hpp"

namespace realm::irealm {

using protocol::TxnRef;

struct UnitConfig {
  std::vector<RegionConfig> regions;
  std::uint16_t default_fragment_beats = 256;
  bool write_buffer = true;
  unsigned buffer_depth_beats = 256;
  // Throttling lowers the outstanding-fragment cap below this base.
  bool throttle = false;
  unsigned max_outstanding = 8;
};

// Ingress regulation for one manager: burst splitter, write buffer, and the
// per-region budget/period monitor with its isolation gate. A bypassed unit is
// a set of wires.
class Unit : public sim::Component {
 public:
  Unit(std::string name, UnitConfig cfg, bool bypass = true);

  sim::SubordinatePorts& upstream() { return up_; }
  sim::ManagerPorts& downstream() { return down_; }

  // Register-level controls. They take effect at the next cycle boundary;
  // a bypass change waits until all traffic through the unit has drained.
  void set_bypass(bool on) { want_bypass_ = on; }
  void set_isolate_now(bool on) { want_isolate_ = on; }
  // Replaces the region set and restarts every period.
  void configure(UnitConfig cfg);

  bool bypassed() const { return bypass_; }
  bool isolated() const { return isolated_ || isolate_now_; }
  const UnitConfig& config() const { return cfg_; }
  const RegionTable& regions() const { return table_; }
  const BudgetState& budget(std::size_t region) const { return budgets_.at(region); }
  const ProbeStats& probes(std::size_t region) const { return probes_.at(region); }
  std::size_t in_flight() const;

  void evaluate(sim::Cycle now) override;
  void commit(sim::Cycle now) override;

 private:
  struct Split {
    TxnDescriptor orig;
    std::uint16_t g;
    std::uint16_t emitted = 0;
    std::uint16_t count;
    bool reject;
    sim::Cycle accepted = 0;
    std::uint16_t err_beats = 0;  // error path progress
  };
  struct ReadTrack {
    std::uint16_t len;
    sim::Cycle accepted;
    protocol::Addr addr;
    std::uint16_t beats = 0;
  };
  struct WriteTrack {
    std::uint16_t fragments;
    sim::Cycle accepted;
    protocol::Addr addr;
    std::uint16_t done = 0;
    Resp resp = Resp::Okay;
  };
  struct WLabel {
    TxnRef ref;
    std::uint16_t len;
    std::uint16_t g;
    bool reject;
    std::uint16_t seen = 0;
  };
  struct WSend {
    TxnRef ref;
    std::uint16_t len;
    std::uint16_t sent = 0;
  };

  void validate(const UnitConfig& cfg) const;
  void activate();
  Split make_split(const TxnDescriptor& t) const;
  bool gate(const TxnDescriptor& frag, std::uint64_t reserved, unsigned extra_out) const;
  struct Labeled {
    ChannelBeat beat;
    bool reject;
  };
  std::optional<Labeled> label_w(const ChannelBeat& in) const;
  std::size_t region_of(const TxnDescriptor& t) const { return table_.decode(t.addr); }
  bool drained() const;

  void eval_bypass();
  void eval_active();
  void commit_bypass();
  void commit_active(sim::Cycle now);
  void complete(protocol::Addr addr, sim::Cycle accepted, sim::Cycle now);

  UnitConfig cfg_;
  RegionTable table_;
  sim::SubordinatePorts up_;
  sim::ManagerPorts down_;

  bool bypass_;
  bool want_bypass_;
  bool isolate_now_ = false;
  bool want_isolate_ = false;
  std::optional<UnitConfig> pending_cfg_;
  bool isolated_ = false;

  std::vector<BudgetState> budgets_;
  std::vector<ProbeStats> probes_;

  // bypass bookkeeping, used to find a drain point
  unsigned pass_reads_ = 0;
  unsigned pass_writes_ = 0;
  std::int64_t pass_w_owed_ = 0;  // W beats of forwarded AWs not yet sent
  bool w_held_ = false;

  std::optional<Split> rsplit_;
  std::optional<Split> wsplit_;
  std::unordered_map<TxnRef, ReadTrack> reads_;
  std::unordered_map<TxnRef, WriteTrack> writes_;
  std::deque<WLabel> wlabel_;
  std::deque<TxnDescriptor> aw_slots_;
  std::deque<ChannelBeat> wfifo_;
  std::deque<WSend> wsend_;
  unsigned frag_out_ = 0;
  bool ar_held_ = false;
  bool aw_held_ = false;
  // evaluate results for the current cycle
  std::optional<TxnDescriptor> ar_frag_;
  std::optional<TxnDescriptor> aw_frag_;
  bool r_err_ = false;
  bool b_err_ = false;
  bool b_absorb_ = false;
};

}  // namespace realm::irealm
