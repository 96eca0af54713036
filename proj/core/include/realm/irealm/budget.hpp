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

#include <cstddef>
#include <vector>

#include "realm/protocol/types.hpp"

namespace realm::irealm {

using protocol::Addr;
using protocol::Cycle;

struct RegionConfig {
  Addr base = 0;
  Addr limit = 0;  // exclusive
  std::uint16_t fragment_beats = 256;
  // Data beats per period; 0 leaves the region unregulated.
  std::uint64_t budget_beats = 0;
  Cycle period_cycles = 1;

  bool limited() const { return budget_beats != 0; }
};

// Byte budgets round down so the converted budget never exceeds the request.
std::uint64_t budget_from_bytes(std::uint64_t bytes, std::uint16_t beat_bytes);

struct BudgetState {
  std::uint64_t remaining = 0;
  Cycle period_elapsed = 0;
  unsigned throttle_level = 0;
  bool above_line = false;
};

struct ProbeStats {
  std::uint64_t beats_forwarded = 0;
  std::uint64_t bytes_forwarded = 0;
  std::uint64_t completed_txns = 0;
  std::uint64_t cumulative_latency = 0;
  Cycle max_latency = 0;

  double mean_latency() const {
    return completed_txns ? static_cast<double>(cumulative_latency) / static_cast<double>(completed_txns) : 0.0;
  }
};

void probe_forward(ProbeStats& s, std::uint16_t len_beats, std::uint16_t beat_bytes);
void probe_complete(ProbeStats& s, Cycle latency);

// Address decoder over the configured regions. Addresses outside every region
// decode to default_region(), which is never regulated.
class RegionTable {
 public:
  RegionTable() = default;
  // Throws sim::ConfigError on overlap or out-of-range parameters.
  RegionTable(std::vector<RegionConfig> regions, std::uint16_t default_fragment);

  std::size_t decode(Addr addr) const;
  std::size_t default_region() const { return regions_.size(); }
  std::size_t size() const { return regions_.size() + 1; }
  const RegionConfig& region(std::size_t i) const { return i < regions_.size() ? regions_[i] : default_; }
  const std::vector<RegionConfig>& regions() const { return regions_; }

 private:
  std::vector<RegionConfig> regions_;
  RegionConfig default_{};
};

bool can_charge(const RegionConfig& cfg, const BudgetState& s, std::uint64_t len, std::uint64_t reserved = 0);
void charge(const RegionConfig& cfg, BudgetState& s, std::uint64_t len);
// Full budget again, no carry-over; the period restarts.
void renew(const RegionConfig& cfg, BudgetState& s);
// Advances the period counter by one cycle; returns true when the budget was renewed.
bool tick_period(const RegionConfig& cfg, BudgetState& s);
// Raises the throttle level each time consumption crosses the pro-rata line.
void track_throttle(const RegionConfig& cfg, BudgetState& s);
unsigned throttle_cap(unsigned base, unsigned level);

}  // namespace realm::irealm
