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

#include <cstdint>
#include <stdexcept>
#include <string>

#include "realm/protocol/types.hpp"

namespace realm::sim {

using protocol::Channel;
using protocol::ChannelBeat;
using protocol::Cycle;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One wire bundle (valid, ready, payload) between an output and an input port.
struct Link {
  std::string name;
  Channel channel = Channel::AR;
  bool valid = false;
  bool ready = false;
  ChannelBeat payload{};

  // Handshake-stability bookkeeping, maintained by the simulator.
  bool pending = false;
  bool withdrawn = false;
  ChannelBeat held{};

  std::uint64_t* changes = nullptr;

  bool fired() const { return valid && ready; }
};

class OutPort {
 public:
  explicit OutPort(Channel ch) : channel_(ch) {}
  OutPort(const OutPort&) = delete;
  OutPort& operator=(const OutPort&) = delete;

  Channel channel() const { return channel_; }
  bool connected() const { return link_ != nullptr; }

  void drive(const ChannelBeat& beat) {
    if (!link_) return;
    if (link_->valid && link_->payload == beat) return;
    link_->valid = true;
    link_->payload = beat;
    ++*link_->changes;
  }
  void idle() {
    if (!link_ || !link_->valid) return;
    link_->valid = false;
    ++*link_->changes;
  }
  // Drops a pending beat on purpose (reset); exempts it from the stability check.
  void withdraw() {
    if (link_) link_->withdrawn = true;
    idle();
  }

  bool valid() const { return link_ && link_->valid; }
  bool ready() const { return link_ && link_->ready; }
  bool fired() const { return link_ && link_->fired(); }
  const ChannelBeat& payload() const { return link_->payload; }

 private:
  friend class Simulator;
  Channel channel_;
  Link* link_ = nullptr;
};

class InPort {
 public:
  explicit InPort(Channel ch) : channel_(ch) {}
  InPort(const InPort&) = delete;
  InPort& operator=(const InPort&) = delete;

  Channel channel() const { return channel_; }
  bool connected() const { return link_ != nullptr; }

  void set_ready(bool r) {
    if (!link_ || link_->ready == r) return;
    link_->ready = r;
    ++*link_->changes;
  }

  bool valid() const { return link_ && link_->valid; }
  bool ready() const { return link_ && link_->ready; }
  bool fired() const { return link_ && link_->fired(); }
  const ChannelBeat& payload() const { return link_->payload; }

 private:
  friend class Simulator;
  Channel channel_;
  Link* link_ = nullptr;
};

// Ports of the requesting side of a five-channel interface.
struct ManagerPorts {
  OutPort ar{Channel::AR};
  OutPort aw{Channel::AW};
  OutPort w{Channel::W};
  InPort r{Channel::R};
  InPort b{Channel::B};
};

// Ports of the responding side of a five-channel interface.
struct SubordinatePorts {
  InPort ar{Channel::AR};
  InPort aw{Channel::AW};
  InPort w{Channel::W};
  OutPort r{Channel::R};
  OutPort b{Channel::B};
};

}  // namespace realm::sim
