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
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "realm/sim/port.hpp"

namespace realm::sim {

// A clocked block. evaluate() must drive every output port from registered
// state and current inputs and be safe to call repeatedly within a cycle;
// commit() latches state from the settled handshakes.
class Component {
 public:
  explicit Component(std::string name) : name_(std::move(name)) {}
  virtual ~Component() = default;
  Component(const Component&) = delete;
  Component& operator=(const Component&) = delete;

  const std::string& name() const { return name_; }

  virtual void evaluate(Cycle now) = 0;
  virtual void commit(Cycle now) = 0;

 private:
  std::string name_;
};

struct TraceRecord {
  Cycle cycle;
  std::uint32_t link;
  ChannelBeat beat;
};

struct StabilityViolation {
  Cycle cycle;
  std::uint32_t link;
};

enum class RunStatus { Completed, Timeout };

struct RunResult {
  RunStatus status;
  Cycle cycles;
};

// Cycle semantics: every cycle, components are evaluated in insertion order
// until no port changes during a full pass (bounded), then each fired link is
// appended to the trace, then components commit in insertion order.
class Simulator {
 public:
  Simulator() = default;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  template <class T, class... Args>
  T& add(Args&&... args) {
    auto owned = std::make_unique<T>(std::forward<Args>(args)...);
    T& ref = *owned;
    components_.push_back(std::move(owned));
    return ref;
  }

  // Wires src to dst; the pair becomes observable in the same cycle.
  Link& connect(OutPort& src, InPort& dst, std::string name);
  void connect(ManagerPorts& m, SubordinatePorts& s, const std::string& name);

  void step();
  RunResult run_until(const std::function<bool()>& done, Cycle max_cycles);

  Cycle cycle() const { return cycle_; }
  const std::deque<Link>& links() const { return links_; }
  const Link& link(std::uint32_t id) const { return links_.at(id); }

  void set_tracing(bool on) { tracing_ = on; }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  const std::vector<StabilityViolation>& stability_violations() const { return stability_; }

  void set_settle_bound(int passes) { settle_bound_ = passes; }
  int max_settle_passes() const { return max_passes_seen_; }

  using CycleObserver = std::function<void(Cycle, const std::deque<Link>&)>;
  void set_cycle_observer(CycleObserver obs) { observer_ = std::move(obs); }

 private:
  std::vector<std::unique_ptr<Component>> components_;
  std::deque<Link> links_;
  std::vector<TraceRecord> trace_;
  std::vector<StabilityViolation> stability_;
  CycleObserver observer_;
  std::uint64_t changes_ = 0;
  Cycle cycle_ = 0;
  int settle_bound_ = 64;
  int max_passes_seen_ = 0;
  bool tracing_ = true;
};

}  // namespace realm::sim
