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
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "realm/protocol/types.hpp"

namespace realm::erealm {

using protocol::Addr;
using protocol::Cycle;
using protocol::Direction;
using protocol::TxnRef;

// Write transactions walk AxHs..BHs, reads AxHs then ArToRvalid..RResp.
enum class Stage : std::uint8_t {
  AxHs,
  AwToWvalid,
  WFirstHs,
  WFirstToLast,
  WlastToBvalid,
  BHs,
  ArToRvalid,
  RFirstToLast,
  RResp,
};

std::string_view to_string(Stage s);

struct StageBudgets {
  // write
  Cycle aw_hs = 1024;
  Cycle aw_to_wvalid = 1024;
  Cycle w_first_hs = 1024;
  Cycle w_per_word = 16;
  Cycle wlast_to_bvalid = 1024;
  Cycle b_hs = 1024;
  // read
  Cycle ar_hs = 1024;
  Cycle ar_to_rvalid = 1024;
  Cycle r_per_word = 16;
  Cycle r_resp = 1024;

  // Every stage gets `stage`, the data stages `per_word` per beat.
  static StageBudgets uniform(Cycle stage, Cycle per_word);

  // Budget for `s` of a burst of `len` beats; data stages are pre-scaled.
  Cycle budget(Direction d, Stage s, std::uint16_t len) const;
  Cycle largest(std::uint16_t max_len) const;
  // Throws sim::ConfigError when any budget is zero.
  void validate() const;
};

// Sparse external ID to compact slot. A slot is handed back by the owner of
// the mapping once its outstanding count drops to zero.
class IdRemap {
 public:
  explicit IdRemap(unsigned num_slots);

  std::optional<unsigned> lookup(std::uint32_t ext) const;
  // Existing or new slot; nullopt when every slot is taken.
  std::optional<unsigned> map(std::uint32_t ext);
  void release(std::uint32_t ext);
  std::size_t used() const;
  unsigned capacity() const { return static_cast<unsigned>(owner_.size()); }
  bool has_free() const { return used() < owner_.size(); }

 private:
  std::vector<std::optional<std::uint32_t>> owner_;
};

struct LdEntry {
  bool used = false;
  std::uint32_t ext = 0;  // manager tag and TID as seen at the subordinate
  unsigned slot = 0;
  TxnRef ref = 0;
  std::uint32_t tid = 0;
  std::uint32_t manager = 0;
  Addr addr = 0;
  std::uint16_t len = 1;
  std::uint16_t beats = 0;  // data beats moved
  Stage stage = Stage::AxHs;
  Cycle stage_start = 0;
  Cycle stage_budget = 0;
  int next = -1;
  std::uint64_t seq = 0;
};

struct StageEvent {
  TxnRef ref;
  Stage stage;
  Cycle cycle;
};

struct HtEntry {
  int head = -1;
  int tail = -1;
  unsigned outstanding = 0;
};

// Dynamic outstanding-transaction queue for one direction: per-slot HT
// chains over a fixed LD pool with a free list, plus the W ownership order.
class Dotq {
 public:
  Dotq(Direction dir, unsigned num_slots, unsigned per_tid, StageBudgets budgets);

  Direction direction() const { return dir_; }
  bool can_insert(std::uint32_t ext) const;
  // New entry in AxHs, appended to its chain (and to the W order for writes).
  int insert(const protocol::TxnDescriptor& txn, std::uint32_t ext, std::uint32_t manager, Cycle now);

  bool mapped(std::uint32_t ext) const { return remap_.lookup(ext).has_value(); }
  int head(std::uint32_t ext) const;
  // Oldest write still owed W beats, or -1.
  int w_owner() const { return wr_.empty() ? -1 : wr_.front(); }

  LdEntry& at(int i) { return ld_[static_cast<std::size_t>(i)]; }
  const LdEntry& at(int i) const { return ld_[static_cast<std::size_t>(i)]; }

  void advance(int i, Stage s, Cycle now);
  // Counts one W beat for the W owner; the owner moves on after its last beat.
  void w_beat(Cycle now);
  // Removes the chain head `i`.
  void retire(int i, Cycle now);

  // Whether the stage timer of `i` is counting: waiting stages only run for
  // the entry that is next to be served.
  bool running(int i) const;
  // Entries whose budget is exhausted when cycle now+1 starts, oldest first.
  std::optional<int> expired(Cycle now) const;

  std::size_t size() const { return live_; }
  std::size_t capacity() const { return ld_.size(); }
  std::vector<int> in_order() const;
  const IdRemap& remap() const { return remap_; }
  const HtEntry& ht(unsigned slot) const { return ht_[slot]; }
  void clear();

  // Optional log of every stage entry, for inspection.
  void record(bool on) { record_ = on; }
  const std::vector<StageEvent>& events() const { return events_; }

 private:
  Direction dir_;
  unsigned per_tid_;
  StageBudgets budgets_;
  IdRemap remap_;
  std::vector<HtEntry> ht_;
  std::vector<LdEntry> ld_;
  std::vector<int> free_;
  std::deque<int> wr_;
  std::size_t live_ = 0;
  std::uint64_t seq_ = 0;
  bool record_ = false;
  std::vector<StageEvent> events_;
};

}  // namespace realm::erealm
