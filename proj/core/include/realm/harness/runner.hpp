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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "realm/harness/scenario.hpp"

namespace realm::harness {

struct ManagerMetrics {
  std::string name;
  std::uint64_t bytes = 0;
  // Completion time of the workload; for periodic schedules the mean
  // activation duration with the first activation left out.
  std::optional<Cycle> runtime;
  double mean_lat = 0.0;
  Cycle max_lat = 0;
  double steady_read_lat = 0.0;
  double bandwidth = 0.0;  // beats per cycle
  std::optional<double> frac_isolated;
  std::uint64_t errors = 0;
  std::uint64_t deficit_bytes = 0;
  bool complete = false;
};

struct RegionMetrics {
  std::string unit;
  std::size_t region = 0;
  bool fallback = false;  // addresses outside every configured region
  std::uint64_t beats = 0;
  std::uint64_t bytes = 0;
  double mean_lat = 0.0;
};

struct FaultEvent {
  std::string unit;
  erealm::FaultRecord record;
  std::optional<Cycle> injected;  // first cycle the subordinate misbehaved
  std::optional<Cycle> irq;
  std::optional<Cycle> reset;
  std::optional<Cycle> notified;
};

struct MetricsReport {
  std::string scenario;
  std::optional<double> sweep_value;
  std::vector<ManagerMetrics> managers;
  std::vector<RegionMetrics> regions;
  std::vector<FaultEvent> faults;
  Cycle cycles = 0;
  bool complete = false;
  std::size_t stability_violations = 0;

  const ManagerMetrics& manager(std::string_view name) const;
};

// Runtime of each bounded manager when it runs alone on the platform with
// every unit at reset.
using Baselines = std::map<std::string, Cycle>;

struct RunOutput {
  MetricsReport report;
  // Per-cycle handshake log in the protocol trace format, when requested.
  std::vector<std::string> trace;
};

// Stand-in for the core's interrupt service routine: `latency` cycles after
// an eREALM interrupt line rises it clears the unit's fault state, and once
// every unit is quiet again it lets managers re-issue what failed. Call
// after_cycle() after every simulator step.
class InterruptService {
 public:
  InterruptService(platform::System& sys, Cycle latency, std::uint32_t programmer);

  void after_cycle();

  const std::vector<Cycle>& irqs(std::size_t unit) const { return irqs_.at(unit); }
  const std::vector<Cycle>& notified(std::size_t unit) const { return notified_.at(unit); }

 private:
  platform::System& sys_;
  Cycle latency_;
  std::uint32_t programmer_;
  std::vector<std::optional<Cycle>> due_;
  std::vector<bool> seen_irq_;
  std::vector<std::vector<Cycle>> irqs_;
  std::vector<std::vector<Cycle>> notified_;
};

Baselines isolated_baselines(const ScenarioConfig& cfg);
RunOutput run_point(const ScenarioConfig& cfg, std::optional<double> sweep_value, const Baselines* baselines,
                    bool keep_trace = false);
MetricsReport run_scenario(const ScenarioConfig& cfg, bool keep_trace = false, std::vector<std::string>* trace = nullptr);

// Sweep points run as independent simulations on up to `threads` threads;
// the reports come back in value order.
std::vector<MetricsReport> run_sweep(const ScenarioConfig& cfg, unsigned threads = 0);
std::vector<MetricsReport> sweep_fragmentation(ScenarioConfig cfg, const std::vector<double>& g_list);
std::vector<MetricsReport> sweep_budget(ScenarioConfig cfg, const std::vector<double>& ratios);
std::vector<MetricsReport> sweep_period(ScenarioConfig cfg, const std::vector<double>& periods);

struct FaultTimeline {
  std::vector<FaultEvent> events;
  bool complete = false;
  // Relative to the injection cycle (or the stage start when nothing was
  // injected on purpose).
  std::optional<Cycle> detection_latency() const;
  std::optional<Cycle> reset_latency() const;
  std::optional<Cycle> notify_latency() const;
};

FaultTimeline fault_scenario(const ScenarioConfig& cfg);

}  // namespace realm::harness
