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
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "realm/interconnect/arbiter.hpp"
#include "realm/sim/simulator.hpp"

namespace realm::interconnect {

using protocol::Addr;
using protocol::Channel;
using protocol::ChannelBeat;

struct AddrRange {
  Addr base = 0;
  Addr limit = 0;  // exclusive
  std::size_t subordinate = 0;
};

class AddrMap {
 public:
  AddrMap() = default;
  // Throws sim::ConfigError on overlap, empty ranges or bad subordinate ids.
  AddrMap(std::vector<AddrRange> ranges, std::size_t num_subordinates);

  std::optional<std::size_t> route(Addr addr) const;
  const std::vector<AddrRange>& ranges() const { return ranges_; }

 private:
  std::vector<AddrRange> ranges_;
};

struct XbarConfig {
  std::size_t num_managers = 1;
  std::size_t num_subordinates = 1;
  std::vector<AddrRange> addr_map;
  unsigned max_outstanding_per_port = 8;
  // AWs granted to one subordinate whose W bursts are still owed. With 1 the
  // W channel is reserved from AW grant until the last W beat.
  unsigned w_reservation_depth = 1;
};

// Combinational crossbar: per-subordinate round-robin on AR and AW with the
// grant held until the handshake, W routed in AW grant order, per-manager
// round-robin on R (locked for a whole burst) and B. Unmapped addresses are
// answered by an internal DECERR responder.
class Crossbar : public sim::Component {
 public:
  Crossbar(std::string name, XbarConfig cfg);

  sim::SubordinatePorts& manager_port(std::size_t m) { return *mgr_ports_.at(m); }
  sim::ManagerPorts& subordinate_port(std::size_t s) { return *sub_ports_.at(s); }
  const XbarConfig& config() const { return cfg_; }
  const AddrMap& addr_map() const { return map_; }

  // Grants issued on the AR/AW channel of subordinate s, per manager.
  const std::vector<std::uint64_t>& ar_grants(std::size_t s) const { return subs_.at(s).ar_grants; }
  const std::vector<std::uint64_t>& aw_grants(std::size_t s) const { return subs_.at(s).aw_grants; }

  void evaluate(sim::Cycle now) override;
  void commit(sim::Cycle now) override;

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct ErrTxn {
    protocol::TxnRef ref;
    protocol::Tid tid;
    std::uint16_t len;
    std::uint16_t sent = 0;
    bool data_done = false;
  };

  struct IdRoute {
    std::size_t target = 0;
    unsigned count = 0;
  };

  struct MgrState {
    unsigned rd_out = 0;
    unsigned wr_out = 0;
    std::unordered_map<std::uint32_t, IdRoute> rd_ids;
    std::unordered_map<std::uint32_t, IdRoute> wr_ids;
    std::deque<std::size_t> w_route;
    std::deque<ErrTxn> err_reads;
    std::deque<ErrTxn> err_writes;
    RrArbiter r_arb;
    RrArbiter b_arb;
    std::size_t r_lock = kNone;
    // evaluate results
    std::size_t ar_target = kNone;
    std::size_t aw_target = kNone;
    std::size_t w_target = kNone;
    std::size_t r_src = kNone;
    std::size_t b_src = kNone;
  };

  struct SubState {
    RrArbiter ar_arb;
    RrArbiter aw_arb;
    std::size_t ar_lock = kNone;
    std::size_t aw_lock = kNone;
    std::deque<std::size_t> w_order;
    std::size_t ar_grant = kNone;
    std::size_t aw_grant = kNone;
    std::size_t w_owner = kNone;
    std::vector<std::uint64_t> ar_grants;
    std::vector<std::uint64_t> aw_grants;
  };

  std::size_t decode(const sim::InPort& ax) const;
  bool id_ok(const std::unordered_map<std::uint32_t, IdRoute>& ids, protocol::Tid tid, std::size_t target) const;
  void eval_address(bool read);
  void eval_write_data();
  void eval_responses(bool read);
  ChannelBeat error_beat(std::size_t m, bool read) const;
  void note_issue(std::unordered_map<std::uint32_t, IdRoute>& ids, protocol::Tid tid, std::size_t target);
  void note_done(std::unordered_map<std::uint32_t, IdRoute>& ids, protocol::Tid tid);

  XbarConfig cfg_;
  AddrMap map_;
  std::size_t err_;  // index of the internal error responder
  std::vector<std::unique_ptr<sim::SubordinatePorts>> mgr_ports_;
  std::vector<std::unique_ptr<sim::ManagerPorts>> sub_ports_;
  std::vector<MgrState> mgrs_;
  std::vector<SubState> subs_;
  std::vector<bool> req_;
};

}  // namespace realm::interconnect
