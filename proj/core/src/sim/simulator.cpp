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

#include "realm/sim/simulator.hpp"

#include <fmt/format.h>

namespace realm::sim {

Link& Simulator::connect(OutPort& src, InPort& dst, std::string name) {
  if (src.channel() != dst.channel())
    throw ConfigError(fmt::format("link {}: channel mismatch {} -> {}", name, protocol::to_string(src.channel()),
                                  protocol::to_string(dst.channel())));
  if (dst.link_) throw ConfigError(fmt::format("link {}: input already driven", name));
  if (src.link_) throw ConfigError(fmt::format("link {}: output already connected", name));
  Link& l = links_.emplace_back();
  l.name = std::move(name);
  l.channel = src.channel();
  l.changes = &changes_;
  src.link_ = &l;
  dst.link_ = &l;
  return l;
}

void Simulator::connect(ManagerPorts& m, SubordinatePorts& s, const std::string& name) {
  connect(m.ar, s.ar, name);
  connect(m.aw, s.aw, name);
  connect(m.w, s.w, name);
  connect(s.r, m.r, name);
  connect(s.b, m.b, name);
}

void Simulator::step() {
  int passes = 0;
  for (;;) {
    std::uint64_t before = changes_;
    for (auto& c : components_) c->evaluate(cycle_);
    ++passes;
    if (changes_ == before) break;
    if (passes >= settle_bound_)
      throw SimulationFault(fmt::format("combinational loop: no convergence after {} passes at cycle {}", passes,
                                        cycle_));
  }
  if (passes > max_passes_seen_) max_passes_seen_ = passes;

  if (observer_) observer_(cycle_, links_);

  std::uint32_t id = 0;
  for (Link& l : links_) {
    if (l.pending && !l.withdrawn && (!l.valid || !(l.payload == l.held)))
      stability_.push_back({cycle_, id});
    if (l.fired() && tracing_) {
      TraceRecord& rec = trace_.emplace_back(TraceRecord{cycle_, id, l.payload});
      rec.beat.cycle = cycle_;
    }
    l.pending = l.valid && !l.ready;
    if (l.pending) l.held = l.payload;
    l.withdrawn = false;
    ++id;
  }

  for (auto& c : components_) c->commit(cycle_);
  ++cycle_;
}

RunResult Simulator::run_until(const std::function<bool()>& done, Cycle max_cycles) {
  while (!(done && done())) {
    if (cycle_ >= max_cycles) return {RunStatus::Timeout, cycle_};
    step();
  }
  return {RunStatus::Completed, cycle_};
}

}  // namespace realm::sim
