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


#include "realm/platform/system.hpp"

#include <set>

namespace realm::platform {

System::System(SystemSpec spec) : spec_(std::move(spec)) {
  if (spec_.managers.empty() || spec_.subordinates.empty())
    throw sim::ConfigError("a system needs at least one manager and one subordinate");
  const std::size_t nm = spec_.managers.size();
  const std::size_t ns = spec_.subordinates.size();

  for (std::size_t i = 0; i < nm; ++i)
    managers_.push_back(&sim_.add<Manager>(spec_.managers[i], static_cast<std::uint32_t>(i), spec_.seed + i));

  if (spec_.with_units) {
    irealm::UnitConfig ic = spec_.irealm;
    ic.regions.clear();
    ic.default_fragment_beats = 256;
    ic.write_buffer = true;
    ic.throttle = false;
    for (std::size_t i = 0; i < nm; ++i) irealms_.push_back(&sim_.add<irealm::Unit>(irealm_prefix(i), ic, true));
  }

  interconnect::XbarConfig xc;
  xc.num_managers = nm;
  xc.num_subordinates = ns;
  xc.max_outstanding_per_port = spec_.xbar_outstanding;
  xc.w_reservation_depth = spec_.w_reservation_depth;
  for (std::size_t j = 0; j < ns; ++j) {
    const auto& s = spec_.subordinates[j];
    xc.addr_map.push_back({s.base, s.base + s.size, j});
  }
  xbar_ = &sim_.add<interconnect::Crossbar>("xbar", xc);

  if (spec_.with_units) {
    erealm::UnitConfig ec = spec_.erealm;
    ec.enable = false;
    for (std::size_t j = 0; j < ns; ++j) erealms_.push_back(&sim_.add<erealm::Unit>(erealm_prefix(j), ec));
  }
  for (std::size_t j = 0; j < ns; ++j) memories_.push_back(&sim_.add<Memory>(spec_.subordinates[j].spec));

  for (std::size_t i = 0; i < nm; ++i) {
    const std::string n = "m" + std::to_string(i);
    if (spec_.with_units) {
      sim_.connect(managers_[i]->port(), irealms_[i]->upstream(), n);
      sim_.connect(irealms_[i]->downstream(), xbar_->manager_port(i), n + ".xbar");
    } else {
      sim_.connect(managers_[i]->port(), xbar_->manager_port(i), n);
    }
  }
  for (std::size_t j = 0; j < ns; ++j) {
    const std::string n = "s" + std::to_string(j);
    if (spec_.with_units) {
      sim_.connect(xbar_->subordinate_port(j), erealms_[j]->upstream(), n + ".xbar");
      sim_.connect(erealms_[j]->downstream(), memories_[j]->port(), n);
      erealms_[j]->on_reset([m = memories_[j]] { m->reset_pulse(); });
    } else {
      sim_.connect(xbar_->subordinate_port(j), memories_[j]->port(), n);
    }
  }

  if (!spec_.with_units) {
    files_.push_back(std::make_unique<RegisterFile>());
    return;
  }
  constexpr std::uint32_t kUnitStride = 0x400;
  if (spec_.decoupled_config) {
    for (std::size_t i = 0; i < nm; ++i) {
      files_.push_back(std::make_unique<RegisterFile>());
      bind_irealm(*files_.back(), irealm_prefix(i), *irealms_[i], 0x100, spec_.max_regions);
    }
    for (std::size_t j = 0; j < ns; ++j) {
      files_.push_back(std::make_unique<RegisterFile>());
      bind_erealm(*files_.back(), erealm_prefix(j), *erealms_[j], 0x100);
    }
  } else {
    files_.push_back(std::make_unique<RegisterFile>());
    std::uint32_t base = 0x100;
    for (std::size_t i = 0; i < nm; ++i, base += kUnitStride)
      bind_irealm(*files_.back(), irealm_prefix(i), *irealms_[i], base, spec_.max_regions);
    for (std::size_t j = 0; j < ns; ++j, base += kUnitStride)
      bind_erealm(*files_.back(), erealm_prefix(j), *erealms_[j], base);
  }
}

RegisterFile& System::irealm_registers(std::size_t i) {
  if (!spec_.decoupled_config) return *files_.front();
  return *files_.at(i);
}

RegisterFile& System::erealm_registers(std::size_t j) {
  if (!spec_.decoupled_config) return *files_.front();
  return *files_.at(managers_.size() + j);
}

std::optional<std::string> System::program(std::uint32_t who,
                                           const std::vector<std::pair<std::string, std::uint64_t>>& regs) {
  std::set<std::pair<RegisterFile*, std::string>> touched;
  for (const auto& [name, value] : regs) {
    RegisterFile* rf = nullptr;
    for (auto& f : files_)
      if (f->offset_of(name)) rf = f.get();
    if (!rf) return "unknown register " + name;
    if (!rf->guard().claimed() && !rf->write(who, "guard", who + 1).ok()) return "guard claim refused";
    if (!rf->write(who, name, value).ok()) return "write refused: " + name;
    const auto dot = name.find('.');
    if (dot != std::string::npos) touched.insert({rf, name.substr(0, dot)});
  }
  for (const auto& [rf, prefix] : touched) {
    if (!rf->offset_of(prefix + ".apply")) continue;
    if (!rf->write(who, prefix + ".apply", 1).ok()) return "configuration rejected: " + prefix;
  }
  return std::nullopt;
}

bool System::finished() const {
  bool any = false;
  for (const Manager* m : managers_) {
    if (m->unbounded()) continue;
    any = true;
    if (!m->done()) return false;
  }
  return any;
}

sim::RunResult System::run(Cycle max_cycles) {
  return sim_.run_until([&] { return finished(); }, max_cycles);
}

std::vector<protocol::ChannelBeat> System::beats(const std::string& link) const {
  std::vector<protocol::ChannelBeat> out;
  for (const auto& t : sim_.trace())
    if (sim_.link(t.link).name == link) out.push_back(t.beat);
  return out;
}

}  // namespace realm::platform
