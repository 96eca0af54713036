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


#include "realm/platform/registers.hpp"

#include <fmt/format.h>

#include "realm/erealm/unit.hpp"
#include "realm/irealm/unit.hpp"

namespace realm::platform {

using protocol::Cycle;

std::string_view to_string(Access a) {
  switch (a) {
    case Access::RW: return "RW";
    case Access::RO: return "RO";
    case Access::WO: return "WO";
  }
  return "?";
}

bool BusGuard::write(std::uint32_t requester, std::uint64_t value) {
  if (!owner_) {
    owner_ = requester;
    return true;
  }
  if (*owner_ != requester) return false;
  if (value == 0) owner_.reset();
  else owner_ = static_cast<std::uint32_t>(value - 1);
  return true;
}

RegisterFile::RegisterFile(bool guarded) : guarded_(guarded) {
  fields_.push_back({"guard", kGuardOffset, 32, 0, Access::RW, "owner identity + 1; 0 when unclaimed"});
  slots_.push_back({});
  by_name_["guard"] = 0;
}

void RegisterFile::add(RegisterField f, Writer w, Reader r) {
  if (f.width < 1 || f.width > 64) throw std::invalid_argument("register width must be 1..64: " + f.name);
  if (by_name_.count(f.name) || find(f.offset)) throw std::invalid_argument("duplicate register " + f.name);
  by_name_[f.name] = fields_.size();
  slots_.push_back({std::move(w), std::move(r), f.reset});
  fields_.push_back(std::move(f));
}

std::optional<std::size_t> RegisterFile::find(std::uint32_t offset) const {
  for (std::size_t i = 0; i < fields_.size(); ++i)
    if (fields_[i].offset == offset) return i;
  return std::nullopt;
}

RegResult RegisterFile::access(const RegAccess& a) {
  const auto i = find(a.offset);
  if (!i) return {Resp::DecErr, 0};
  if (*i == 0) {
    if (!guarded_) return {Resp::SlvErr, 0};
    if (a.write) return {guard_.write(a.requester, a.value) ? Resp::Okay : Resp::SlvErr, 0};
    if (!guard_.allows(a.requester)) return {Resp::SlvErr, 0};
    return {Resp::Okay, guard_.read()};
  }
  if (guarded_ && !guard_.allows(a.requester)) return {Resp::SlvErr, 0};

  const RegisterField& f = fields_[*i];
  Slot& s = slots_[*i];
  const std::uint64_t mask = f.width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << f.width) - 1;
  if (a.write) {
    if (f.access == Access::RO) return {Resp::SlvErr, 0};
    const std::uint64_t v = a.value & mask;
    if (s.writer && !s.writer(v)) return {Resp::SlvErr, 0};
    if (f.access == Access::RW) s.value = v;
    return {Resp::Okay, 0};
  }
  if (f.access == Access::WO) return {Resp::Okay, 0};
  if (s.reader) return {Resp::Okay, s.reader() & mask};
  return {Resp::Okay, s.value};
}

RegResult RegisterFile::read(std::uint32_t requester, std::string_view name) {
  auto off = offset_of(name);
  if (!off) return {Resp::DecErr, 0};
  return access({requester, false, *off, 0});
}

RegResult RegisterFile::write(std::uint32_t requester, std::string_view name, std::uint64_t value) {
  auto off = offset_of(name);
  if (!off) return {Resp::DecErr, 0};
  return access({requester, true, *off, value});
}

std::uint64_t RegisterFile::shadow(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) throw std::out_of_range("no register " + std::string(name));
  return slots_[it->second].value;
}

std::optional<std::uint32_t> RegisterFile::offset_of(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return fields_[it->second].offset;
}

void RegisterFile::reset() {
  guard_.reset();
  for (std::size_t i = 1; i < fields_.size(); ++i) {
    if (fields_[i].access != Access::RW) continue;
    slots_[i].value = fields_[i].reset;
    if (slots_[i].writer) slots_[i].writer(fields_[i].reset);
  }
}

std::string RegisterFile::markdown() const {
  std::string out = "| name | offset | width | reset | access | description |\n|---|---|---|---|---|---|\n";
  for (const auto& f : fields_)
    out += fmt::format("| `{}` | 0x{:04x} | {} | 0x{:x} | {} | {} |\n", f.name, f.offset, f.width, f.reset,
                       to_string(f.access), f.doc);
  return out;
}

namespace {

struct Offsets {
  std::uint32_t next;
  std::uint32_t operator()() {
    const std::uint32_t o = next;
    next += 8;
    return o;
  }
};

}  // namespace

std::uint32_t bind_irealm(RegisterFile& rf, const std::string& prefix, irealm::Unit& unit, std::uint32_t base,
                          unsigned max_regions) {
  Offsets at{base};
  const std::string p = prefix + ".";
  rf.add({p + "bypass", at(), 1, 1, Access::RW, "1: unit is a set of wires"},
         [&unit](std::uint64_t v) {
           unit.set_bypass(v & 1);
           return true;
         });
  rf.add({p + "isolate", at(), 1, 0, Access::RW, "1: stall new requests now"},
         [&unit](std::uint64_t v) {
           unit.set_isolate_now(v & 1);
           return true;
         });
  rf.add({p + "write_buffer", at(), 1, 1, Access::RW, "staged"});
  rf.add({p + "throttle", at(), 1, 0, Access::RW, "staged"});
  rf.add({p + "default_fragment", at(), 9, 256, Access::RW, "staged; beats, outside every region"});
  for (unsigned r = 0; r < max_regions; ++r) {
    const std::string q = fmt::format("{}r{}.", p, r);
    rf.add({q + "base", at(), 64, 0, Access::RW, "staged"});
    rf.add({q + "limit", at(), 64, 0, Access::RW, "staged; exclusive, region unused while limit <= base"});
    rf.add({q + "fragment", at(), 9, 256, Access::RW, "staged; beats"});
    rf.add({q + "budget", at(), 32, 0, Access::RW, "staged; beats per period, 0 unregulated"});
    rf.add({q + "period", at(), 32, 1, Access::RW, "staged; cycles"});
  }
  rf.add({p + "apply", at(), 1, 0, Access::WO, "validates and applies the staged fields"},
         [&rf, &unit, p, max_regions](std::uint64_t) {
           irealm::UnitConfig cfg = unit.config();
           cfg.write_buffer = rf.shadow(p + "write_buffer") & 1;
           cfg.throttle = rf.shadow(p + "throttle") & 1;
           cfg.default_fragment_beats = static_cast<std::uint16_t>(rf.shadow(p + "default_fragment"));
           cfg.regions.clear();
           for (unsigned r = 0; r < max_regions; ++r) {
             const std::string q = fmt::format("{}r{}.", p, r);
             irealm::RegionConfig rc;
             rc.base = rf.shadow(q + "base");
             rc.limit = rf.shadow(q + "limit");
             if (rc.limit <= rc.base) continue;
             rc.fragment_beats = static_cast<std::uint16_t>(rf.shadow(q + "fragment"));
             rc.budget_beats = rf.shadow(q + "budget");
             rc.period_cycles = rf.shadow(q + "period");
             cfg.regions.push_back(rc);
           }
           try {
             unit.configure(std::move(cfg));
           } catch (const sim::ConfigError&) {
             return false;
           }
           return true;
         });
  rf.add({p + "isolated", at(), 1, 0, Access::RO, "budget depleted or isolate set"}, {},
         [&unit] { return std::uint64_t{unit.isolated()}; });
  rf.add({p + "bypassed", at(), 1, 1, Access::RO, "bypass currently in effect"}, {},
         [&unit] { return std::uint64_t{unit.bypassed()}; });
  for (unsigned r = 0; r < max_regions; ++r) {
    const std::string q = fmt::format("{}r{}.", p, r);
    rf.add({q + "remaining", at(), 64, 0, Access::RO, "beats left in the current period"}, {}, [&unit, r] {
      return r + 1 < unit.regions().size() ? unit.budget(r).remaining : 0;
    });
    rf.add({q + "bytes", at(), 64, 0, Access::RO, "bytes forwarded"}, {}, [&unit, r] {
      return r + 1 < unit.regions().size() ? unit.probes(r).bytes_forwarded : 0;
    });
  }
  return at.next;
}

std::uint32_t bind_erealm(RegisterFile& rf, const std::string& prefix, erealm::Unit& unit, std::uint32_t base) {
  Offsets at{base};
  const std::string p = prefix + ".";
  const erealm::UnitConfig d = unit.config();
  rf.add({p + "enable", at(), 1, d.enable, Access::RW, "staged"});
  rf.add({p + "auto_reset", at(), 1, d.auto_reset, Access::RW, "staged; reset the subordinate on a fault"});
  rf.add({p + "reset_latency", at(), 2, d.reset_latency, Access::RW, "staged; 1 or 2 cycles"});
  struct Budget {
    const char* name;
    Cycle erealm::StageBudgets::*field;
  };
  static constexpr Budget kBudgets[] = {
      {"aw_hs", &erealm::StageBudgets::aw_hs},
      {"aw_to_wvalid", &erealm::StageBudgets::aw_to_wvalid},
      {"w_first_hs", &erealm::StageBudgets::w_first_hs},
      {"w_per_word", &erealm::StageBudgets::w_per_word},
      {"wlast_to_bvalid", &erealm::StageBudgets::wlast_to_bvalid},
      {"b_hs", &erealm::StageBudgets::b_hs},
      {"ar_hs", &erealm::StageBudgets::ar_hs},
      {"ar_to_rvalid", &erealm::StageBudgets::ar_to_rvalid},
      {"r_per_word", &erealm::StageBudgets::r_per_word},
      {"r_resp", &erealm::StageBudgets::r_resp},
  };
  for (const auto& b : kBudgets)
    rf.add({p + "budget." + b.name, at(), 32, d.budgets.*b.field, Access::RW, "staged; cycles"});
  rf.add({p + "apply", at(), 1, 0, Access::WO, "validates and applies the staged fields"},
         [&rf, &unit, p](std::uint64_t) {
           erealm::UnitConfig cfg = unit.config();
           cfg.enable = rf.shadow(p + "enable") & 1;
           cfg.auto_reset = rf.shadow(p + "auto_reset") & 1;
           cfg.reset_latency = static_cast<unsigned>(rf.shadow(p + "reset_latency"));
           for (const auto& b : kBudgets) cfg.budgets.*b.field = rf.shadow(p + "budget." + b.name);
           try {
             unit.configure(cfg);
           } catch (const sim::ConfigError&) {
             return false;
           }
           return true;
         });
  rf.add({p + "clear", at(), 1, 0, Access::WO, "leave recovery once owed completions are out"},
         [&unit](std::uint64_t v) {
           if (v & 1) unit.clear_fault();
           return true;
         });
  rf.add({p + "reset", at(), 1, 0, Access::WO, "pulse the subordinate reset"}, [&unit](std::uint64_t v) {
    if (v & 1) unit.command_reset();
    return true;
  });
  rf.add({p + "irq", at(), 1, 0, Access::RO, "interrupt line"}, {}, [&unit] { return std::uint64_t{unit.irq()}; });
  rf.add({p + "tracked", at(), 16, 0, Access::RO, "transactions in the DOTQ"}, {},
         [&unit] { return std::uint64_t{unit.tracked()}; });
  rf.add({p + "fault.count", at(), 16, 0, Access::RO, "faults logged"}, {},
         [&unit] { return std::uint64_t{unit.faults().size()}; });
  auto last = [&unit]() -> const erealm::FaultRecord* {
    return unit.faults().empty() ? nullptr : &unit.faults().back();
  };
  rf.add({p + "fault.cause", at(), 3, 0, Access::RO, "latest fault: 1 timeout, 2 TID mismatch, 3 superfluous, 4 protocol"},
         {}, [last] { return last() ? static_cast<std::uint64_t>(last()->cause) + 1 : 0; });
  rf.add({p + "fault.stage", at(), 4, 0, Access::RO, "latest fault: stage + 1, 0 when not attributable"}, {},
         [last] { return last() && last()->stage ? static_cast<std::uint64_t>(*last()->stage) + 1 : 0; });
  rf.add({p + "fault.tid", at(), 32, 0, Access::RO, "latest fault: external TID"}, {},
         [last] { return last() ? std::uint64_t{last()->ext_tid} : 0; });
  rf.add({p + "fault.addr", at(), 64, 0, Access::RO, "latest fault: address"}, {},
         [last] { return last() ? last()->addr : 0; });
  rf.add({p + "fault.cycle", at(), 64, 0, Access::RO, "latest fault: detection cycle"}, {},
         [last] { return last() ? last()->cycle : 0; });
  return at.next;
}

}  // namespace realm::platform
