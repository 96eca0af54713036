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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "realm/erealm/unit.hpp"
#include "realm/interconnect/crossbar.hpp"
#include "realm/irealm/unit.hpp"
#include "realm/platform/manager.hpp"
#include "realm/platform/memory.hpp"
#include "realm/platform/registers.hpp"

namespace realm::platform {

struct SubordinateSlot {
  SubordinateSpec spec;
  Addr base = 0;
  Addr size = 0;
};

struct SystemSpec {
  std::vector<ManagerSpec> managers;
  std::vector<SubordinateSlot> subordinates;
  // iREALM in front of every manager and eREALM in front of every subordinate.
  bool with_units = true;
  unsigned max_regions = 2;
  // Hardware parameters of the units; their runtime fields start at reset.
  irealm::UnitConfig irealm{};
  erealm::UnitConfig erealm{};
  unsigned xbar_outstanding = 8;
  unsigned w_reservation_depth = 1;
  // One register file (and guard) per unit instead of a shared one.
  bool decoupled_config = false;
  std::uint64_t seed = 1;
};

// Managers, optional units, crossbar and memories wired into one simulator.
// Links are named m<i> at the manager boundary, m<i>.xbar between an iREALM
// unit and the crossbar, s<j>.xbar between the crossbar and an eREALM unit
// and s<j> at the subordinate boundary.
class System {
 public:
  explicit System(SystemSpec spec);

  sim::Simulator& sim() { return sim_; }
  const sim::Simulator& sim() const { return sim_; }
  const SystemSpec& spec() const { return spec_; }

  std::size_t num_managers() const { return managers_.size(); }
  std::size_t num_subordinates() const { return memories_.size(); }
  Manager& manager(std::size_t i) { return *managers_.at(i); }
  const Manager& manager(std::size_t i) const { return *managers_.at(i); }
  Memory& memory(std::size_t j) { return *memories_.at(j); }
  irealm::Unit* irealm(std::size_t i) { return irealms_.empty() ? nullptr : irealms_.at(i); }
  erealm::Unit* erealm(std::size_t j) { return erealms_.empty() ? nullptr : erealms_.at(j); }
  interconnect::Crossbar& xbar() { return *xbar_; }

  // Shared register file; with decoupled_config, the one for manager i's iREALM.
  RegisterFile& registers() { return *files_.front(); }
  RegisterFile& irealm_registers(std::size_t i);
  RegisterFile& erealm_registers(std::size_t j);
  static std::string irealm_prefix(std::size_t i) { return "irealm" + std::to_string(i); }
  static std::string erealm_prefix(std::size_t j) { return "erealm" + std::to_string(j); }

  // Writes a list of name=value pairs as requester `who` (claiming the guard
  // first if needed) and applies every touched unit. Returns the first failed
  // access, if any.
  std::optional<std::string> program(std::uint32_t who, const std::vector<std::pair<std::string, std::uint64_t>>& regs);

  // True once every bounded manager is done.
  bool finished() const;
  sim::RunResult run(Cycle max_cycles);

  // Handshakes seen on one link, in cycle order.
  std::vector<protocol::ChannelBeat> beats(const std::string& link) const;

 private:
  SystemSpec spec_;
  sim::Simulator sim_;
  std::vector<Manager*> managers_;
  std::vector<irealm::Unit*> irealms_;
  interconnect::Crossbar* xbar_ = nullptr;
  std::vector<erealm::Unit*> erealms_;
  std::vector<Memory*> memories_;
  std::vector<std::unique_ptr<RegisterFile>> files_;
};

}  // namespace realm::platform
