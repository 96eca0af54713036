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


#include "realm/harness/export.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace realm::harness {

namespace {

std::string opt_num(const std::optional<double>& v) { return v ? fmt::format("{:g}", *v) : std::string{}; }

}  // namespace

std::string csv_rows(const MetricsReport& r) {
  std::string out;
  for (const auto& m : r.managers) {
    out += fmt::format("{},{},{},{},{},{:.2f},{},{}\n", r.scenario, opt_num(r.sweep_value), m.name, m.bytes,
                       m.runtime ? std::to_string(*m.runtime) : std::string{}, m.mean_lat, m.max_lat,
                       m.frac_isolated ? fmt::format("{:.4f}", *m.frac_isolated) : std::string{});
  }
  return out;
}

std::string to_csv(const std::vector<MetricsReport>& reports) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : reports) out += csv_rows(r);
  return out;
}

std::string format_report(const MetricsReport& r) {
  std::string out = fmt::format("scenario {}", r.scenario);
  if (r.sweep_value) out += fmt::format(" @ {:g}", *r.sweep_value);
  out += fmt::format(": {} cycles, {}\n", r.cycles, r.complete ? "complete" : "INCOMPLETE");
  for (const auto& m : r.managers) {
    out += fmt::format("  {:<8} bytes {:>8}  runtime {:>8}  lat mean {:8.2f} max {:6}  steady rd {:8.2f}  bw {:.3f}",
                       m.name, m.bytes, m.runtime ? std::to_string(*m.runtime) : "-", m.mean_lat, m.max_lat,
                       m.steady_read_lat, m.bandwidth);
    if (m.frac_isolated) out += fmt::format("  frac {:.4f}", *m.frac_isolated);
    if (m.errors) out += fmt::format("  errors {}", m.errors);
    if (m.deficit_bytes) out += fmt::format("  deficit {}", m.deficit_bytes);
    out += '\n';
  }
  for (const auto& g : r.regions) {
    if (g.beats == 0) continue;
    const auto label = g.fallback ? std::string("default") : fmt::format("r{}", g.region);
    out += fmt::format("  {}.{} beats {} bytes {} mean lat {:.2f}\n", g.unit, label, g.beats, g.bytes, g.mean_lat);
  }
  for (const auto& f : r.faults) {
    const auto& rec = f.record;
    out += fmt::format("  fault {} {} {} tid {:#x} addr {:#x} detected {}", f.unit, erealm::to_string(rec.cause),
                       rec.direction == protocol::Direction::Read ? "read" : "write", rec.ext_tid, rec.addr, rec.cycle);
    if (rec.stage) out += fmt::format(" stage {} (since {})", erealm::to_string(*rec.stage), rec.stage_start);
    if (f.injected) out += fmt::format(" injected {}", *f.injected);
    if (f.irq) out += fmt::format(" irq {}", *f.irq);
    if (f.reset) out += fmt::format(" reset {}", *f.reset);
    if (f.notified) out += fmt::format(" notified {}", *f.notified);
    out += '\n';
  }
  if (r.stability_violations) out += fmt::format("  handshake stability violations: {}\n", r.stability_violations);
  return out;
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace realm::harness
