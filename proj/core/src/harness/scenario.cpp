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


#include "realm/harness/scenario.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace realm::harness {

using nlohmann::json;
using platform::FaultInjection;
using platform::ManagerKind;
using platform::ManagerSpec;
using platform::Pacing;
using platform::SubordinateSlot;
using platform::SubordinateSpec;
using platform::Traffic;
using sim::ConfigError;

namespace {

template <class E>
struct Names {
  E value;
  std::string_view name;
};

constexpr std::array<Names<SweepAxis>, 4> kAxes{{{SweepAxis::None, "none"},
                                                 {SweepAxis::Fragmentation, "fragmentation"},
                                                 {SweepAxis::BudgetRatio, "budget_ratio"},
                                                 {SweepAxis::Period, "period"}}};
constexpr std::array<Names<ManagerKind>, 4> kKinds{{{ManagerKind::CoreCopy, "core_copy"},
                                                    {ManagerKind::DmaBurst, "dma"},
                                                    {ManagerKind::Periodic, "periodic"},
                                                    {ManagerKind::Random, "random"}}};
constexpr std::array<Names<Traffic>, 3> kTraffic{
    {{Traffic::Read, "read"}, {Traffic::Write, "write"}, {Traffic::Copy, "copy"}}};
constexpr std::array<Names<Pacing>, 2> kPacing{{{Pacing::Asap, "asap"}, {Pacing::Uniform, "uniform"}}};
constexpr std::array<Names<protocol::Direction>, 2> kDirs{
    {{protocol::Direction::Read, "read"}, {protocol::Direction::Write, "write"}}};
constexpr std::array<Names<FaultInjection::Trigger>, 2> kTriggers{
    {{FaultInjection::Trigger::AtCycle, "at_cycle"}, {FaultInjection::Trigger::AfterBeats, "after_beats"}}};
constexpr std::array<Names<FaultInjection::Behavior>, 4> kBehaviors{
    {{FaultInjection::Behavior::StallForever, "stall_forever"},
     {FaultInjection::Behavior::StallFor, "stall_for"},
     {FaultInjection::Behavior::WrongTidResponse, "wrong_tid"},
     {FaultInjection::Behavior::ExtraHandshake, "extra_handshake"}}};

template <class E, std::size_t N>
std::string_view name_of(const std::array<Names<E>, N>& t, E v) {
  for (const auto& n : t)
    if (n.value == v) return n.name;
  return "?";
}

template <class E, std::size_t N>
E parse_enum(const std::array<Names<E>, N>& t, const json& j, std::string_view what) {
  const auto s = j.get<std::string>();
  for (const auto& n : t)
    if (n.name == s) return n.value;
  std::string allowed;
  for (const auto& n : t) allowed += fmt::format("{}{}", allowed.empty() ? "" : ", ", n.name);
  throw ConfigError(fmt::format("{}: unknown value '{}' (expected one of {})", what, s, allowed));
}

// Accepts plain numbers and strings such as "0x100000".
std::uint64_t u64(const json& j, std::string_view what) {
  if (j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0)) return j.get<std::uint64_t>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    std::size_t used = 0;
    try {
      auto v = std::stoull(s, &used, 0);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(fmt::format("{}: expected a non-negative integer, got {}", what, j.dump()));
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", where));
  for (const auto& [k, v] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError(fmt::format("{}: unknown key '{}'", where, k));
  }
}

template <class T>
void get_u(const json& j, const char* key, T& out, std::string_view where) {
  if (j.contains(key)) out = static_cast<T>(u64(j.at(key), fmt::format("{}.{}", where, key)));
}

platform::AddrWindow window(const json& j, std::string_view where) {
  check_keys(j, {"base", "size"}, where);
  return {u64(j.at("base"), where), u64(j.at("size"), where)};
}

json window_json(platform::AddrWindow w) { return {{"base", w.base}, {"size", w.size}}; }

ManagerSpec parse_manager(const json& j, std::size_t i) {
  const auto where = fmt::format("managers[{}]", i);
  check_keys(j,
             {"name", "kind", "traffic", "len", "beat_bytes", "total_bytes", "bytes_per_activation", "period",
              "activations", "pacing", "src", "dst", "max_reads", "max_writes", "tid", "start", "w_first_delay",
              "w_beat_interval", "retry_on_error", "random"},
             where);
  ManagerSpec m;
  m.name = j.value("name", fmt::format("m{}", i));
  if (j.contains("kind")) m.kind = parse_enum(kKinds, j["kind"], where + ".kind");
  if (j.contains("traffic")) m.traffic = parse_enum(kTraffic, j["traffic"], where + ".traffic");
  if (j.contains("pacing")) m.pacing = parse_enum(kPacing, j["pacing"], where + ".pacing");
  get_u(j, "len", m.txn_len_beats, where);
  get_u(j, "beat_bytes", m.beat_bytes, where);
  get_u(j, "total_bytes", m.total_bytes, where);
  get_u(j, "bytes_per_activation", m.bytes_per_activation, where);
  get_u(j, "period", m.activation_period, where);
  get_u(j, "activations", m.activations, where);
  get_u(j, "max_reads", m.max_outstanding_reads, where);
  get_u(j, "max_writes", m.max_outstanding_writes, where);
  get_u(j, "tid", m.tid, where);
  get_u(j, "start", m.start_cycle, where);
  get_u(j, "w_first_delay", m.w_first_delay, where);
  get_u(j, "w_beat_interval", m.w_beat_interval, where);
  if (j.contains("src")) m.src = window(j["src"], where + ".src");
  if (j.contains("dst")) m.dst = window(j["dst"], where + ".dst");
  m.retry_on_error = j.value("retry_on_error", false);
  if (j.contains("random")) {
    const auto& r = j["random"];
    const auto rw = where + ".random";
    check_keys(r,
               {"txns", "write_fraction", "num_tids", "max_len", "non_modifiable_fraction", "atomic_fraction",
                "max_gap", "windows"},
               rw);
    get_u(r, "txns", m.random.txns, rw);
    get_u(r, "num_tids", m.random.num_tids, rw);
    get_u(r, "max_len", m.random.max_len, rw);
    get_u(r, "max_gap", m.random.max_gap, rw);
    m.random.write_fraction = r.value("write_fraction", m.random.write_fraction);
    m.random.non_modifiable_fraction = r.value("non_modifiable_fraction", m.random.non_modifiable_fraction);
    m.random.atomic_fraction = r.value("atomic_fraction", m.random.atomic_fraction);
    if (r.contains("windows"))
      for (const auto& w : r["windows"]) m.random.windows.push_back(window(w, rw + ".windows"));
  }
  return m;
}

json manager_json(const ManagerSpec& m) {
  json j{{"name", m.name},
         {"kind", name_of(kKinds, m.kind)},
         {"traffic", name_of(kTraffic, m.traffic)},
         {"len", m.txn_len_beats},
         {"beat_bytes", m.beat_bytes},
         {"total_bytes", m.total_bytes},
         {"src", window_json(m.src)},
         {"dst", window_json(m.dst)},
         {"max_reads", m.max_outstanding_reads},
         {"max_writes", m.max_outstanding_writes},
         {"tid", m.tid},
         {"start", m.start_cycle},
         {"retry_on_error", m.retry_on_error}};
  if (m.kind == ManagerKind::Periodic) {
    j["bytes_per_activation"] = m.bytes_per_activation;
    j["period"] = m.activation_period;
    j["activations"] = m.activations;
    j["pacing"] = name_of(kPacing, m.pacing);
  }
  if (m.w_first_delay != 0) j["w_first_delay"] = m.w_first_delay;
  if (m.w_beat_interval != 1) j["w_beat_interval"] = m.w_beat_interval;
  if (m.kind == ManagerKind::Random) {
    json ws = json::array();
    for (const auto& w : m.random.windows) ws.push_back(window_json(w));
    j["random"] = {{"txns", m.random.txns},
                   {"write_fraction", m.random.write_fraction},
                   {"num_tids", m.random.num_tids},
                   {"max_len", m.random.max_len},
                   {"non_modifiable_fraction", m.random.non_modifiable_fraction},
                   {"atomic_fraction", m.random.atomic_fraction},
                   {"max_gap", m.random.max_gap},
                   {"windows", ws}};
  }
  return j;
}

SubordinateSlot parse_subordinate(const json& j, std::size_t i) {
  const auto where = fmt::format("subordinates[{}]", i);
  check_keys(j, {"name", "base", "size", "fixed_latency", "beats_per_cycle", "queue_capacity", "min_occupancy", "fault"},
             where);
  SubordinateSlot s;
  s.spec.name = j.value("name", fmt::format("s{}", i));
  s.base = u64(j.at("base"), where + ".base");
  s.size = u64(j.at("size"), where + ".size");
  get_u(j, "fixed_latency", s.spec.fixed_latency, where);
  get_u(j, "beats_per_cycle", s.spec.beats_per_cycle, where);
  get_u(j, "queue_capacity", s.spec.queue_capacity, where);
  get_u(j, "min_occupancy", s.spec.min_occupancy, where);
  if (j.contains("fault")) {
    const auto& f = j["fault"];
    const auto fw = where + ".fault";
    check_keys(f, {"trigger", "at_cycle", "after_beats", "direction", "nth", "behavior", "stall_cycles"}, fw);
    FaultInjection fi;
    if (f.contains("trigger")) fi.trigger = parse_enum(kTriggers, f["trigger"], fw + ".trigger");
    if (f.contains("direction")) fi.direction = parse_enum(kDirs, f["direction"], fw + ".direction");
    if (f.contains("behavior")) fi.behavior = parse_enum(kBehaviors, f["behavior"], fw + ".behavior");
    get_u(f, "at_cycle", fi.at_cycle, fw);
    get_u(f, "after_beats", fi.after_beats, fw);
    get_u(f, "nth", fi.nth, fw);
    get_u(f, "stall_cycles", fi.stall_cycles, fw);
    s.spec.fault = fi;
  }
  return s;
}

json subordinate_json(const SubordinateSlot& s) {
  json j{{"name", s.spec.name},
         {"base", s.base},
         {"size", s.size},
         {"fixed_latency", s.spec.fixed_latency},
         {"beats_per_cycle", s.spec.beats_per_cycle},
         {"queue_capacity", s.spec.queue_capacity},
         {"min_occupancy", s.spec.min_occupancy}};
  if (s.spec.fault) {
    const auto& f = *s.spec.fault;
    j["fault"] = {{"trigger", name_of(kTriggers, f.trigger)}, {"at_cycle", f.at_cycle},
                  {"after_beats", f.after_beats},             {"direction", name_of(kDirs, f.direction)},
                  {"nth", f.nth},                             {"behavior", name_of(kBehaviors, f.behavior)},
                  {"stall_cycles", f.stall_cycles}};
  }
  return j;
}

void parse_units(const json& j, platform::SystemSpec& s) {
  check_keys(j,
             {"enabled", "max_regions", "decoupled_config", "xbar_outstanding", "w_reservation_depth", "irealm",
              "erealm"},
             "units");
  s.with_units = j.value("enabled", s.with_units);
  s.decoupled_config = j.value("decoupled_config", s.decoupled_config);
  get_u(j, "max_regions", s.max_regions, "units");
  get_u(j, "xbar_outstanding", s.xbar_outstanding, "units");
  get_u(j, "w_reservation_depth", s.w_reservation_depth, "units");
  if (j.contains("irealm")) {
    const auto& i = j["irealm"];
    check_keys(i, {"buffer_depth_beats", "max_outstanding"}, "units.irealm");
    get_u(i, "buffer_depth_beats", s.irealm.buffer_depth_beats, "units.irealm");
    get_u(i, "max_outstanding", s.irealm.max_outstanding, "units.irealm");
  }
  if (j.contains("erealm")) {
    const auto& e = j["erealm"];
    check_keys(e, {"num_slots", "per_tid"}, "units.erealm");
    get_u(e, "num_slots", s.erealm.num_slots, "units.erealm");
    get_u(e, "per_tid", s.erealm.per_tid, "units.erealm");
  }
}

}  // namespace

std::string_view to_string(SweepAxis a) { return name_of(kAxes, a); }

std::size_t ScenarioConfig::manager_index(std::string_view n) const {
  for (std::size_t i = 0; i < system.managers.size(); ++i)
    if (system.managers[i].name == n) return i;
  throw ConfigError(fmt::format("scenario {}: no manager named '{}'", name, n));
}

void ScenarioConfig::validate() const {
  if (system.managers.empty()) throw ConfigError(fmt::format("scenario {}: no managers", name));
  if (system.subordinates.empty()) throw ConfigError(fmt::format("scenario {}: no subordinates", name));
  for (std::size_t i = 0; i < system.managers.size(); ++i)
    for (std::size_t k = i + 1; k < system.managers.size(); ++k)
      if (system.managers[i].name == system.managers[k].name)
        throw ConfigError(fmt::format("scenario {}: duplicate manager name '{}'", name, system.managers[i].name));
  if (!critical.empty()) manager_index(critical);
  if (programmer >= system.managers.size())
    throw ConfigError(fmt::format("scenario {}: programmer {} is not a manager", name, programmer));
  if (max_cycles == 0) throw ConfigError(fmt::format("scenario {}: max_cycles must be positive", name));
  if (!registers.empty() && !system.with_units)
    throw ConfigError(fmt::format("scenario {}: registers given but the units are disabled", name));

  if (sweep.axis == SweepAxis::None) return;
  if (!system.with_units) throw ConfigError(fmt::format("scenario {}: sweeps need the units", name));
  if (sweep.values.empty()) throw ConfigError(fmt::format("scenario {}: sweep without values", name));
  for (double v : sweep.values) {
    bool ok = true;
    switch (sweep.axis) {
      case SweepAxis::Fragmentation:
        ok = v == 0 || (v >= 1 && v <= 256 && v == static_cast<double>(static_cast<unsigned>(v)));
        break;
      case SweepAxis::BudgetRatio:
        ok = v > 0;
        break;
      case SweepAxis::Period:
        ok = v >= 1 && v == static_cast<double>(static_cast<std::uint64_t>(v));
        break;
      case SweepAxis::None:
        break;
    }
    if (!ok) throw ConfigError(fmt::format("scenario {}: sweep value {} out of range for {}", name, v, to_string(sweep.axis)));
  }
  if (sweep.axis == SweepAxis::BudgetRatio) {
    if (critical.empty()) throw ConfigError(fmt::format("scenario {}: budget_ratio sweep needs a critical manager", name));
    if (sweep.period == 0 || sweep.total_budget < 2)
      throw ConfigError(fmt::format("scenario {}: budget_ratio sweep needs period > 0 and total_budget >= 2", name));
  }
  if (sweep.axis == SweepAxis::Period && !(sweep.budget_fraction > 0 && sweep.budget_fraction <= 1))
    throw ConfigError(fmt::format("scenario {}: budget_fraction must be in (0, 1]", name));
}

ScenarioConfig parse_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("scenario: {}", e.what()));
  }
  check_keys(j,
             {"name", "description", "seed", "max_cycles", "critical", "interrupt_latency", "warmup_txns",
              "programmer", "units", "managers", "subordinates", "registers", "sweep"},
             "scenario");
  ScenarioConfig c;
  try {
    c.name = j.value("name", "scenario");
    c.description = j.value("description", "");
    c.critical = j.value("critical", "");
    get_u(j, "seed", c.system.seed, "scenario");
    get_u(j, "max_cycles", c.max_cycles, "scenario");
    get_u(j, "interrupt_latency", c.interrupt_latency, "scenario");
    get_u(j, "warmup_txns", c.warmup_txns, "scenario");
    get_u(j, "programmer", c.programmer, "scenario");
    if (j.contains("units")) parse_units(j["units"], c.system);
    const auto& ms = j.at("managers");
    for (std::size_t i = 0; i < ms.size(); ++i) c.system.managers.push_back(parse_manager(ms[i], i));
    const auto& ss = j.at("subordinates");
    for (std::size_t i = 0; i < ss.size(); ++i) c.system.subordinates.push_back(parse_subordinate(ss[i], i));
    if (j.contains("registers")) {
      for (const auto& r : j["registers"]) {
        if (!r.is_array() || r.size() != 2 || !r[0].is_string())
          throw ConfigError(fmt::format("registers: expected [name, value], got {}", r.dump()));
        c.registers.emplace_back(r[0].get<std::string>(), u64(r[1], r[0].get<std::string>()));
      }
    }
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      check_keys(s, {"axis", "values", "period", "total_budget", "budget_fraction"}, "sweep");
      if (s.contains("axis")) c.sweep.axis = parse_enum(kAxes, s["axis"], "sweep.axis");
      if (s.contains("values")) c.sweep.values = s["values"].get<std::vector<double>>();
      get_u(s, "period", c.sweep.period, "sweep");
      get_u(s, "total_budget", c.sweep.total_budget, "sweep");
      c.sweep.budget_fraction = s.value("budget_fraction", c.sweep.budget_fraction);
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("scenario {}: {}", c.name, e.what()));
  }
  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string dump_scenario(const ScenarioConfig& c) {
  json ms = json::array();
  for (const auto& m : c.system.managers) ms.push_back(manager_json(m));
  json ss = json::array();
  for (const auto& s : c.system.subordinates) ss.push_back(subordinate_json(s));
  json regs = json::array();
  for (const auto& [n, v] : c.registers) regs.push_back({n, v});
  json j{{"name", c.name},
         {"description", c.description},
         {"seed", c.system.seed},
         {"max_cycles", c.max_cycles},
         {"critical", c.critical},
         {"interrupt_latency", c.interrupt_latency},
         {"warmup_txns", c.warmup_txns},
         {"programmer", c.programmer},
         {"units",
          {{"enabled", c.system.with_units},
           {"max_regions", c.system.max_regions},
           {"decoupled_config", c.system.decoupled_config},
           {"xbar_outstanding", c.system.xbar_outstanding},
           {"w_reservation_depth", c.system.w_reservation_depth},
           {"irealm",
            {{"buffer_depth_beats", c.system.irealm.buffer_depth_beats},
             {"max_outstanding", c.system.irealm.max_outstanding}}},
           {"erealm", {{"num_slots", c.system.erealm.num_slots}, {"per_tid", c.system.erealm.per_tid}}}}},
         {"managers", ms},
         {"subordinates", ss},
         {"registers", regs}};
  if (c.sweep.axis != SweepAxis::None) {
    j["sweep"] = {{"axis", to_string(c.sweep.axis)},
                  {"values", c.sweep.values},
                  {"period", c.sweep.period},
                  {"total_budget", c.sweep.total_budget},
                  {"budget_fraction", c.sweep.budget_fraction}};
  }
  return j.dump(2);
}

RegisterList sweep_registers(const ScenarioConfig& cfg, double value) {
  RegisterList out;
  const auto n = cfg.system.managers.size();
  auto unit = [](std::size_t i, const char* field) { return platform::System::irealm_prefix(i) + "." + field; };
  switch (cfg.sweep.axis) {
    case SweepAxis::None:
      break;
    case SweepAxis::Fragmentation: {
      const auto g = static_cast<std::uint64_t>(value);
      if (g == 0) break;  // every unit stays at reset
      for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(unit(i, "bypass"), 0);
        out.emplace_back(unit(i, "default_fragment"), g);
        for (unsigned r = 0; r < cfg.system.max_regions; ++r)
          out.emplace_back(unit(i, ("r" + std::to_string(r) + ".fragment").c_str()), g);
      }
      break;
    }
    case SweepAxis::BudgetRatio: {
      const auto crit = cfg.manager_index(cfg.critical);
      const double total = static_cast<double>(cfg.sweep.total_budget);
      for (std::size_t i = 0; i < n; ++i) {
        const double share = i == crit ? total * value / (1.0 + value) : total / (1.0 + value);
        const auto beats = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(share));
        out.emplace_back(unit(i, "bypass"), 0);
        out.emplace_back(unit(i, "r0.budget"), beats);
        out.emplace_back(unit(i, "r0.period"), cfg.sweep.period);
      }
      break;
    }
    case SweepAxis::Period: {
      const auto period = static_cast<std::uint64_t>(value);
      const auto beats = std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(static_cast<double>(period) * cfg.sweep.budget_fraction));
      for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(unit(i, "bypass"), 0);
        out.emplace_back(unit(i, "r0.budget"), beats);
        out.emplace_back(unit(i, "r0.period"), period);
      }
      break;
    }
  }
  return out;
}

}  // namespace realm::harness
