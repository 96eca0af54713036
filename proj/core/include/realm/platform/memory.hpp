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
#include <string>

#include "realm/sim/simulator.hpp"

namespace realm::platform {

using protocol::Cycle;
using protocol::Direction;

struct FaultInjection {
  enum class Trigger { AtCycle, AfterBeats };
  enum class Behavior { StallForever, StallFor, WrongTidResponse, ExtraHandshake };

  Trigger trigger = Trigger::AfterBeats;
  Cycle at_cycle = 0;
  // AfterBeats: the nth (0-based) transaction of `direction` misbehaves after
  // it has moved `after_beats` data beats.
  unsigned after_beats = 1;
  Direction direction = Direction::Read;
  unsigned nth = 0;

  Behavior behavior = Behavior::StallForever;
  Cycle stall_cycles = 0;
};

struct SubordinateSpec {
  std::string name = "mem";
  // Cycles from issue to the first read beat; a write completes the same
  // number of cycles after issue (or one cycle after its last W beat).
  Cycle fixed_latency = 11;
  unsigned beats_per_cycle = 1;
  // Accepted requests waiting for the data port.
  unsigned queue_capacity = 4;
  // Data-port cycles a transaction holds at minimum, whatever its length.
  unsigned min_occupancy = 1;
  std::optional<FaultInjection> fault;
};

// Single-ported memory: AR and AW share one request queue served in order;
// each transaction holds the data port for max(len, min_occupancy) cycles and
// its read beats come out fixed_latency cycles after it took the port.
class Memory : public sim::Component {
 public:
  explicit Memory(SubordinateSpec spec);

  sim::SubordinatePorts& port() { return port_; }
  const SubordinateSpec& spec() const { return spec_; }

  // Reset pulse: drops all state, pending outputs and the fault plan.
  void reset_pulse() { reset_requested_ = true; }

  std::uint64_t resets() const { return resets_; }
  std::uint64_t accepted() const { return accepted_; }
  // First cycle the injected misbehavior was in effect.
  std::optional<Cycle> fault_cycle() const { return fault_cycle_; }
  bool idle() const;

  void evaluate(Cycle now) override;
  void commit(Cycle now) override;

 private:
  struct Request {
    protocol::TxnDescriptor txn;
    std::uint32_t manager;
    unsigned ordinal;  // per-direction acceptance index
  };
  struct Scheduled {
    Cycle at;
    protocol::ChannelBeat beat;
    unsigned ordinal;
  };
  struct ActiveWrite {
    Request req;
    Cycle issued;
    std::uint16_t received = 0;
  };

  bool stalled(Cycle now) const;
  void issue(Cycle now);
  void arm_after_beats(Direction d, unsigned ordinal, unsigned beats_done, Cycle now);
  void do_reset();

  SubordinateSpec spec_;
  sim::SubordinatePorts port_;
  std::deque<Request> queue_;
  std::deque<Scheduled> rpipe_;
  std::deque<Scheduled> bpipe_;
  std::optional<ActiveWrite> wactive_;
  Cycle port_free_ = 0;
  bool accept_write_next_ = false;
  bool pick_write_ = false;
  unsigned read_ordinal_ = 0;
  unsigned write_ordinal_ = 0;

  std::optional<FaultInjection> plan_;
  bool fault_active_ = false;
  Cycle stall_until_ = 0;
  std::optional<Cycle> fault_cycle_;
  bool extra_pending_ = false;
  // responses presented but not yet taken; they must stay on the wire
  std::optional<protocol::ChannelBeat> r_out_;
  std::optional<protocol::ChannelBeat> b_out_;
  bool b_out_extra_ = false;
  bool b_extra_ = false;

  bool reset_requested_ = false;
  bool just_reset_ = false;
  std::uint64_t resets_ = 0;
  std::uint64_t accepted_ = 0;
};

}  // namespace realm::platform
