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


#include "realm/harness/area.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "realm/sim/port.hpp"

namespace realm::harness {

namespace {

using P = AreaParam;
using G = AreaGroup;
using S = AreaScope;
using U = UnitKind;

std::array<double, kAreaParams> only(P p, double w) {
  std::array<double, kAreaParams> a{};
  a[static_cast<unsigned>(p)] = w;
  return a;
}

std::array<double, kAreaParams> isolate_weights() {
  std::array<double, kAreaParams> a{};
  a[static_cast<unsigned>(P::AddrWidth)] = 3.5;
  a[static_cast<unsigned>(P::DataWidth)] = 2.7;
  a[static_cast<unsigned>(P::NumPending)] = 9.0;
  return a;
}

std::array<double, kAreaParams> splitter_weights() {
  std::array<double, kAreaParams> a{};
  a[static_cast<unsigned>(P::AddrWidth)] = 49.3;
  a[static_cast<unsigned>(P::DataWidth)] = 1.5;
  a[static_cast<unsigned>(P::NumPending)] = 729;
  return a;
}

std::string_view group_name(G g) {
  switch (g) {
    case G::ConfigRegisters: return "config";
    case G::IRealm: return "irealm";
    case G::ERealm: return "erealm";
  }
  return "?";
}

void range_check(std::vector<std::string>& w, std::string_view who, std::string_view what, double v, double lo,
                 double hi) {
  if (v < lo || v > hi) w.push_back(fmt::format("{}: {} = {} outside the fitted range [{}, {}]", who, what, v, lo, hi));
}

void check_unit(std::vector<std::string>& w, std::string_view who, const UnitAreaParams& u, bool irealm) {
  if (u.units == 0) return;
  range_check(w, who, "addr_width", u.addr_width, 32, 64);
  range_check(w, who, "data_width", u.data_width, 32, 64);
  range_check(w, who, "num_pending", u.num_pending, 2, 16);
  if (irealm) {
    range_check(w, who, "buffer_depth", u.buffer_depth, 2, 16);
    const auto v = param_vector(u);
    range_check(w, who, "storage_size", v[static_cast<unsigned>(P::StorageSize)], 256, 8192);
    if (u.storage_size && *u.storage_size != u.buffer_depth * u.data_width)
      w.push_back(fmt::format("{}: storage_size {} differs from buffer_depth x data_width = {}", who, *u.storage_size,
                              u.buffer_depth * u.data_width));
  } else {
    const auto v = param_vector(u);
    const double counters = v[static_cast<unsigned>(P::NumCounters)];
    if (u.num_counters && *u.num_counters != u.num_pending * u.num_tids)
      w.push_back(fmt::format("{}: num_counters {} differs from num_pending x num_tids = {}", who, *u.num_counters,
                              u.num_pending * u.num_tids));
    if (counters > 0) range_check(w, who, "counter width", u.counter_storage / counters, 10, 32);
  }
}

}  // namespace

std::string_view to_string(AreaParam p) {
  static constexpr std::string_view names[] = {"addr_width",   "data_width",   "num_pending",  "num_tids",
                                               "buffer_depth", "storage_size", "num_counters", "counter_storage"};
  return names[static_cast<unsigned>(p)];
}

const std::vector<AreaWeights>& area_weights() {
  static const std::vector<AreaWeights> w{
      {"Status", G::ConfigRegisters, S::PerUnitRegion, U::IRealm, {}, 24.6},
      {"Budget/Period", G::ConfigRegisters, S::PerUnitRegion, U::IRealm, {}, 1320},
      {"Region Bounds", G::ConfigRegisters, S::PerUnitRegion, U::IRealm, only(P::AddrWidth, 20.6), 0},
      {"Config", G::ConfigRegisters, S::PerUnit, U::IRealm, {}, 83.5},
      {"Status/Config", G::ConfigRegisters, S::PerUnit, U::ERealm, {}, 9.7},
      {"R/W Budget", G::ConfigRegisters, S::PerUnit, U::ERealm, only(P::NumCounters, 770), 0},
      {"Bus Guard", G::ConfigRegisters, S::PerSystem, U::IRealm, {}, 261},
      {"Tracking Counters", G::IRealm, S::PerUnitRegion, U::IRealm, {}, 1930},
      {"Region Decoders", G::IRealm, S::PerUnitRegion, U::IRealm, only(P::AddrWidth, 20.8), 0},
      {"Isolate/Throttle", G::IRealm, S::PerUnit, U::IRealm, isolate_weights(), 267},
      {"Burst Splitter", G::IRealm, S::PerUnit, U::IRealm, splitter_weights(), 4840},
      {"Meta Buffer", G::IRealm, S::PerUnit, U::IRealm, only(P::AddrWidth, 38.1), 1310},
      {"Write Buffer", G::IRealm, S::PerUnit, U::IRealm, only(P::StorageSize, 264), 11.4},
      {"ID Remapper", G::ERealm, S::PerUnit, U::ERealm, {}, 0},
      {"Stage Counters", G::ERealm, S::PerUnit, U::ERealm, only(P::CounterStorage, 129), 735},
      {"HT Table", G::ERealm, S::PerUnit, U::ERealm, only(P::NumPending, 201), 0},
      {"LD Table", G::ERealm, S::PerUnit, U::ERealm, only(P::NumTids, 51), 0},
      {"R/W Table/Ctrl", G::ERealm, S::PerUnit, U::ERealm, only(P::NumCounters, 329), 356},
      {"Reset Ctrl", G::ERealm, S::PerUnit, U::ERealm, {}, 1270},
  };
  return w;
}

std::array<double, kAreaParams> param_vector(const UnitAreaParams& u) {
  std::array<double, kAreaParams> v{};
  v[static_cast<unsigned>(P::AddrWidth)] = u.addr_width;
  v[static_cast<unsigned>(P::DataWidth)] = u.data_width;
  v[static_cast<unsigned>(P::NumPending)] = u.num_pending;
  v[static_cast<unsigned>(P::NumTids)] = u.num_tids;
  v[static_cast<unsigned>(P::BufferDepth)] = u.buffer_depth;
  v[static_cast<unsigned>(P::StorageSize)] = u.storage_size.value_or(u.buffer_depth * u.data_width);
  v[static_cast<unsigned>(P::NumCounters)] = u.num_counters.value_or(u.num_pending * u.num_tids);
  v[static_cast<unsigned>(P::CounterStorage)] = u.counter_storage;
  return v;
}

double block_area(const AreaWeights& w, const std::array<double, kAreaParams>& values) {
  double a = w.constant;
  for (std::size_t i = 0; i < kAreaParams; ++i) a += w.weight[i] * values[i];
  return a;
}

AreaReport area_estimate(const AreaParams& p) {
  AreaReport r;
  check_unit(r.warnings, "irealm", p.irealm, true);
  check_unit(r.warnings, "erealm", p.erealm, false);
  const auto iv = param_vector(p.irealm);
  const auto ev = param_vector(p.erealm);
  const bool any = p.irealm.units + p.erealm.units > 0;
  for (const auto& w : area_weights()) {
    const auto& u = w.unit == U::IRealm ? p.irealm : p.erealm;
    double n = 0;
    switch (w.scope) {
      case S::PerSystem: n = any ? 1 : 0; break;
      case S::PerUnit: n = u.units; break;
      case S::PerUnitRegion: n = static_cast<double>(u.units) * u.regions; break;
    }
    const double each = block_area(w, w.unit == U::IRealm ? iv : ev);
    AreaLine line{std::string(w.block), w.group, w.unit, n, each, each * n};
    (w.unit == U::IRealm ? r.irealm_ge : r.erealm_ge) += line.total_ge;
    r.lines.push_back(std::move(line));
  }
  r.total_ge = r.irealm_ge + r.erealm_ge;
  return r;
}

AreaParams hermes_area_params() {
  AreaParams p;
  p.irealm.units = 3;
  p.irealm.regions = 2;
  p.irealm.addr_width = 48;
  p.irealm.data_width = 64;
  p.irealm.num_pending = 16;
  p.irealm.buffer_depth = 4;
  p.irealm.storage_size = 256;
  p.erealm.units = 1;
  p.erealm.addr_width = 48;
  p.erealm.data_width = 64;
  p.erealm.num_pending = 2;
  p.erealm.num_tids = 2;
  p.erealm.num_counters = 20;
  p.erealm.counter_storage = 200;
  return p;
}

namespace {

UnitAreaParams parse_unit(const nlohmann::json& j, std::string_view where) {
  UnitAreaParams u;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw sim::ConfigError(fmt::format("area {}: '{}' must be a number", where, k));
    const double d = v.get<double>();
    if (d < 0) throw sim::ConfigError(fmt::format("area {}: '{}' must not be negative", where, k));
    if (k == "units") u.units = static_cast<unsigned>(d);
    else if (k == "regions") u.regions = static_cast<unsigned>(d);
    else if (k == "addr_width") u.addr_width = d;
    else if (k == "data_width") u.data_width = d;
    else if (k == "num_pending") u.num_pending = d;
    else if (k == "num_tids") u.num_tids = d;
    else if (k == "buffer_depth") u.buffer_depth = d;
    else if (k == "storage_size") u.storage_size = d;
    else if (k == "num_counters") u.num_counters = d;
    else if (k == "counter_storage") u.counter_storage = d;
    else throw sim::ConfigError(fmt::format("area {}: unknown key '{}'", where, k));
  }
  return u;
}

}  // namespace

AreaParams parse_area_params(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw sim::ConfigError(fmt::format("area params: {}", e.what()));
  }
  if (!j.is_object()) throw sim::ConfigError("area params: expected an object");
  AreaParams p;
  for (const auto& [k, v] : j.items()) {
    if (k == "irealm") p.irealm = parse_unit(v, k);
    else if (k == "erealm") p.erealm = parse_unit(v, k);
    else throw sim::ConfigError(fmt::format("area params: unknown key '{}'", k));
  }
  return p;
}

AreaParams load_area_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sim::ConfigError("cannot open area params file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_area_params(ss.str());
}

std::string format_area(const AreaReport& r) {
  std::string out = fmt::format("{:<8} {:<20} {:>9} {:>12} {:>12}\n", "group", "block", "instances", "each [GE]",
                                "total [GE]");
  for (const auto& l : r.lines) {
    if (l.instances == 0) continue;
    out += fmt::format("{:<8} {:<20} {:>9} {:>12.1f} {:>12.1f}\n", group_name(l.group), l.block, l.instances, l.each_ge,
                       l.total_ge);
  }
  out += fmt::format("irealm total {:.2f} kGE\nerealm total {:.2f} kGE\ntotal {:.2f} kGE\n", r.irealm_ge / 1000,
                     r.erealm_ge / 1000, r.total_ge / 1000);
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  return out;
}

}  // namespace realm::harness
