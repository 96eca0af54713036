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

#include "realm/irealm/budget.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "realm/sim/port.hpp"

namespace realm::irealm {

std::uint64_t budget_from_bytes(std::uint64_t bytes, std::uint16_t beat_bytes) { return bytes / beat_bytes; }

void probe_forward(ProbeStats& s, std::uint16_t len_beats, std::uint16_t beat_bytes) {
  s.beats_forwarded += len_beats;
  s.bytes_forwarded += std::uint64_t{len_beats} * beat_bytes;
}

void probe_complete(ProbeStats& s, Cycle latency) {
  ++s.completed_txns;
  s.cumulative_latency += latency;
  s.max_latency = std::max(s.max_latency, latency);
}

RegionTable::RegionTable(std::vector<RegionConfig> regions, std::uint16_t default_fragment)
    : regions_(std::move(regions)) {
  if (default_fragment < 1 || default_fragment > 256)
    throw sim::ConfigError(fmt::format("default fragment size {} outside [1, 256]", default_fragment));
  default_.fragment_beats = default_fragment;
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    const RegionConfig& r = regions_[i];
    if (r.base >= r.limit) throw sim::ConfigError(fmt::format("region {}: empty range", i));
    if (r.fragment_beats < 1 || r.fragment_beats > 256)
      throw sim::ConfigError(fmt::format("region {}: fragment size {} outside [1, 256]", i, r.fragment_beats));
    if (r.period_cycles < 1) throw sim::ConfigError(fmt::format("region {}: period must be >= 1", i));
    if (r.limited() && r.budget_beats < r.fragment_beats)
      throw sim::ConfigError(
          fmt::format("region {}: budget {} smaller than one fragment of {}", i, r.budget_beats, r.fragment_beats));
    for (std::size_t j = 0; j < i; ++j)
      if (r.base < regions_[j].limit && regions_[j].base < r.limit)
        throw sim::ConfigError(fmt::format("regions {} and {} overlap", j, i));
  }
}

std::size_t RegionTable::decode(Addr addr) const {
  for (std::size_t i = 0; i < regions_.size(); ++i)
    if (addr >= regions_[i].base && addr < regions_[i].limit) return i;
  return default_region();
}

bool can_charge(const RegionConfig& cfg, const BudgetState& s, std::uint64_t len, std::uint64_t reserved) {
  if (!cfg.limited()) return true;
  return s.remaining >= reserved && s.remaining - reserved >= len;
}

void charge(const RegionConfig& cfg, BudgetState& s, std::uint64_t len) {
  if (!cfg.limited()) return;
  s.remaining -= std::min(s.remaining, len);
}

void renew(const RegionConfig& cfg, BudgetState& s) {
  s.remaining = cfg.budget_beats;
  s.period_elapsed = 0;
  s.throttle_level = 0;
  s.above_line = false;
}

bool tick_period(const RegionConfig& cfg, BudgetState& s) {
  if (++s.period_elapsed < cfg.period_cycles) return false;
  renew(cfg, s);
  return true;
}

void track_throttle(const RegionConfig& cfg, BudgetState& s) {
  if (!cfg.limited()) return;
  const std::uint64_t used = cfg.budget_beats - s.remaining;
  const std::uint64_t line = cfg.budget_beats * s.period_elapsed / cfg.period_cycles;
  const bool above = used > line;
  if (above && !s.above_line) ++s.throttle_level;
  s.above_line = above;
}

unsigned throttle_cap(unsigned base, unsigned level) {
  const unsigned shifted = level >= 31 ? 0 : base >> level;
  return std::max(1u, shifted);
}

}  // namespace realm::irealm
