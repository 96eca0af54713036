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
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "realm/sim/simulator.hpp"

namespace realm::platform {

using protocol::Addr;
using protocol::Cycle;
using protocol::Resp;
using protocol::TxnDescriptor;
using protocol::TxnRef;

enum class ManagerKind { CoreCopy, DmaBurst, Periodic, Random };
enum class Traffic { Read, Write, Copy };
enum class Pacing { Asap, Uniform };

struct AddrWindow {
  Addr base = 0;
  Addr size = 0;
};

struct RandomTraffic {
  unsigned txns = 64;
  double write_fraction = 0.5;
  unsigned num_tids = 4;
  unsigned max_len = 32;
  double non_modifiable_fraction = 0.0;
  double atomic_fraction = 0.0;
  Cycle max_gap = 8;
  std::vector<AddrWindow> windows;  // picked uniformly per transaction
};

struct ManagerSpec {
  std::string name = "mgr";
  ManagerKind kind = ManagerKind::CoreCopy;
  std::uint16_t txn_len_beats = 1;
  std::uint16_t beat_bytes = 8;
  // CoreCopy and finite DMA: bytes to move; 0 makes a DMA run forever.
  std::uint64_t total_bytes = 1024;
  // Periodic schedule.
  std::uint64_t bytes_per_activation = 0;
  Cycle activation_period = 0;
  unsigned activations = 0;
  Pacing pacing = Pacing::Asap;

  Traffic traffic = Traffic::Read;
  AddrWindow src{};  // read window
  AddrWindow dst{};  // write window
  unsigned max_outstanding_reads = 1;
  unsigned max_outstanding_writes = 4;
  std::uint32_t tid = 0;
  Cycle start_cycle = 0;
  // Slow-writer knobs: delay from AW presentation to the first W beat, and
  // cycles between consecutive W beats.
  Cycle w_first_delay = 0;
  Cycle w_beat_interval = 1;
  // Errored transactions are re-issued once release_retries() is called.
  bool retry_on_error = false;
  RandomTraffic random{};
};

struct TxnRecord {
  TxnDescriptor txn;
  Cycle accepted = 0;   // address handshake
  Cycle completed = 0;  // last R beat or B handshake
  Resp resp = Resp::Okay;
  unsigned activation = 0;
  Cycle latency() const { return completed - accepted; }
};

struct ActivationRecord {
  Cycle start = 0;
  Cycle finish = 0;
  std::uint64_t bytes_in_window = 0;  // issued before the next activation began
  std::uint64_t deficit = 0;
  bool complete = false;
};

// Traffic generator with a five-channel manager port.
class Manager : public sim::Component {
 public:
  Manager(ManagerSpec spec, std::uint32_t id, std::uint64_t seed = 1);

  sim::ManagerPorts& port() { return port_; }
  const ManagerSpec& spec() const { return spec_; }
  std::uint32_t id() const { return id_; }

  bool done() const;
  bool unbounded() const { return spec_.kind == ManagerKind::DmaBurst && spec_.total_bytes == 0; }
  std::optional<Cycle> finish_cycle() const { return finish_; }

  const std::vector<TxnRecord>& completed() const { return records_; }
  const std::vector<ActivationRecord>& activations() const { return activations_; }
  std::uint64_t bytes_completed() const { return bytes_done_; }
  std::uint64_t beats_completed() const { return beats_done_; }
  std::uint64_t errors() const { return errors_; }
  std::size_t outstanding() const { return inflight_.size(); }

  // Makes held retries eligible for issue from the next cycle on.
  void release_retries();
  std::size_t held_retries() const { return held_.size(); }

  void evaluate(Cycle now) override;
  void commit(Cycle now) override;

 private:

  struct Pending {
    TxnDescriptor txn;
    Cycle release;
    unsigned activation = 0;
    int iteration = -1;
  };
  struct InFlight {
    TxnDescriptor txn;
    Cycle accepted;
    unsigned activation;
    int iteration;
    Resp resp = Resp::Okay;
    std::uint16_t beats = 0;
  };
  struct WStream {
    TxnRef ref;
    std::uint16_t len;
    Cycle ready_at;
    std::uint16_t sent = 0;
  };

  TxnDescriptor make(protocol::Direction d, AddrWindow w, Addr& cursor, std::uint16_t len);
  void plan_periodic();
  void plan_random();
  void refill(Cycle now);
  void on_complete(InFlight f, Cycle now);
  void choose_next(Cycle now);

  ManagerSpec spec_;
  std::uint32_t id_;
  std::mt19937_64 rng_;
  sim::ManagerPorts port_;

  std::deque<Pending> reads_;
  std::deque<Pending> writes_;
  std::vector<Pending> held_;
  std::optional<Pending> ar_cur_;
  std::optional<Pending> aw_cur_;
  std::deque<WStream> wq_;
  Cycle w_next_ = 0;
  std::unordered_map<TxnRef, InFlight> inflight_;
  unsigned rd_out_ = 0;
  unsigned wr_out_ = 0;

  std::uint32_t seq_ = 0;
  Addr src_cursor_ = 0;
  Addr dst_cursor_ = 0;
  // Stream kinds: iterations planned so far and the total (0 = unbounded).
  std::uint64_t iterations_ = 0;
  std::uint64_t iteration_goal_ = 0;
  std::vector<unsigned> activation_left_;

  std::vector<TxnRecord> records_;
  std::vector<ActivationRecord> activations_;
  std::uint64_t bytes_done_ = 0;
  std::uint64_t beats_done_ = 0;
  std::uint64_t errors_ = 0;
  std::uint64_t required_ = 0;  // successful completions that make the run done
  std::uint64_t ok_ = 0;
  std::optional<Cycle> finish_;
};

}  // namespace realm::platform
