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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "realm/platform/system.hpp"

namespace realm::harness {

using protocol::Cycle;

enum class SweepAxis { None, Fragmentation, BudgetRatio, Period };

std::string_view to_string(SweepAxis a);

struct SweepSpec {
  SweepAxis axis = SweepAxis::None;
  // Fragmentation: beats, 0 leaves the units at reset (unregulated).
  // BudgetRatio: critical budget over each other manager's budget.
  // Period: regulation period in cycles.
  std::vector<double> values;
  // BudgetRatio: shared period and the budget split between the managers.
  Cycle period = 1000;
  std::uint64_t total_budget = 1000;
  // Period: budget as a fraction of the beats one period can carry.
  double budget_fraction = 0.5;
};

using RegisterList = std::vector<std::pair<std::string, std::uint64_t>>;

struct ScenarioConfig {
  std::string name;
  std::string description;
  platform::SystemSpec system;
  // Written by `programmer` before the first cycle, in order.
  RegisterList registers;
  std::uint32_t programmer = 0;
  Cycle max_cycles = 2'000'000;
  // Manager whose fairness the scenario is about; empty means all.
  std::string critical;
  SweepSpec sweep;
  // Cycles from the interrupt line to the core's handler clearing the fault.
  Cycle interrupt_latency = 100;
  // Reads excluded from the steady-state latency.
  unsigned warmup_txns = 1;

  // Throws sim::ConfigError when a reference does not resolve or a sweep
  // value is out of range.
  void validate() const;
  std::size_t manager_index(std::string_view name) const;
};

// Scenario files are JSON; see README for the schema.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::string& path);
std::string dump_scenario(const ScenarioConfig& cfg);

std::vector<std::string> preset_names();
bool is_preset(std::string_view name);
// Throws sim::ConfigError for an unknown name.
ScenarioConfig preset(std::string_view name);

// Registers a sweep point adds to the scenario's own programming.
RegisterList sweep_registers(const ScenarioConfig& cfg, double value);

}  // namespace realm::harness
