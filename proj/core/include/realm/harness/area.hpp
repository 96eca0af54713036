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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace realm::harness {

enum class AreaParam : unsigned {
  AddrWidth,
  DataWidth,
  NumPending,
  NumTids,
  BufferDepth,
  StorageSize,
  NumCounters,
  CounterStorage,
};
inline constexpr std::size_t kAreaParams = 8;

std::string_view to_string(AreaParam p);

enum class AreaGroup { ConfigRegisters, IRealm, ERealm };
// PS: once per system, PU: per unit, PUR: per unit and region.
enum class AreaScope { PerSystem, PerUnit, PerUnitRegion };
enum class UnitKind { IRealm, ERealm };

struct AreaWeights {
  std::string_view block;
  AreaGroup group;
  AreaScope scope;
  // Unit type whose count (and parameters) the block scales with. System
  // blocks are booked to the iREALM subsystem.
  UnitKind unit;
  std::array<double, kAreaParams> weight{};
  double constant = 0.0;  // GE
};

// Fitted coefficients in GE per parameter unit.
const std::vector<AreaWeights>& area_weights();

struct UnitAreaParams {
  unsigned units = 0;
  unsigned regions = 0;
  double addr_width = 0;
  double data_width = 0;
  double num_pending = 0;
  double num_tids = 0;
  double buffer_depth = 0;
  // Derived as buffer_depth x data_width unless given.
  std::optional<double> storage_size;
  // Derived as num_pending x num_tids unless given.
  std::optional<double> num_counters;
  double counter_storage = 0;  // bits over all counters
};

struct AreaParams {
  UnitAreaParams irealm;
  UnitAreaParams erealm;
};

struct AreaLine {
  std::string block;
  AreaGroup group;
  UnitKind unit;
  double instances = 0;
  double each_ge = 0;
  double total_ge = 0;
};

struct AreaReport {
  std::vector<AreaLine> lines;
  double irealm_ge = 0;
  double erealm_ge = 0;
  double total_ge = 0;
  // Parameters outside the range the model was fitted on; the estimate is
  // still computed.
  std::vector<std::string> warnings;
};

AreaReport area_estimate(const AreaParams& p);
// One block's contribution for a single instance.
double block_area(const AreaWeights& w, const std::array<double, kAreaParams>& values);
std::array<double, kAreaParams> param_vector(const UnitAreaParams& u);

// Configuration of the reference mixed-criticality SoC.
AreaParams hermes_area_params();

// JSON: {"irealm": {...}, "erealm": {...}} with the UnitAreaParams field names.
AreaParams parse_area_params(std::string_view text);
AreaParams load_area_params(const std::string& path);
std::string format_area(const AreaReport& r);

}  // namespace realm::harness
