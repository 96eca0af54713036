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


#include "realm/erealm/dotq.hpp"

#include <algorithm>

#include "realm/sim/port.hpp"

namespace realm::erealm {

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::AxHs: return "ax_hs";
    case Stage::AwToWvalid: return "aw_to_wvalid";
    case Stage::WFirstHs: return "w_first_hs";
    case Stage::WFirstToLast: return "w_first_to_last";
    case Stage::WlastToBvalid: return "wlast_to_bvalid";
    case Stage::BHs: return "b_hs";
    case Stage::ArToRvalid: return "ar_to_rvalid";
    case Stage::RFirstToLast: return "r_first_to_last";
    case Stage::RResp: return "r_resp";
  }
  return "?";
}

StageBudgets StageBudgets::uniform(Cycle stage, Cycle per_word) {
  StageBudgets b;
  b.aw_hs = b.aw_to_wvalid = b.w_first_hs = b.wlast_to_bvalid = b.b_hs = stage;
  b.ar_hs = b.ar_to_rvalid = b.r_resp = stage;
  b.w_per_word = b.r_per_word = per_word;
  return b;
}

Cycle StageBudgets::budget(Direction d, Stage s, std::uint16_t len) const {
  switch (s) {
    case Stage::AxHs: return d == Direction::Read ? ar_hs : aw_hs;
    case Stage::AwToWvalid: return aw_to_wvalid;
    case Stage::WFirstHs: return w_first_hs;
    case Stage::WFirstToLast: return w_per_word * len;
    case Stage::WlastToBvalid: return wlast_to_bvalid;
    case Stage::BHs: return b_hs;
    case Stage::ArToRvalid: return ar_to_rvalid;
    case Stage::RFirstToLast: return r_per_word * len;
    case Stage::RResp: return r_resp;
  }
  return 1;
}

Cycle StageBudgets::largest(std::uint16_t max_len) const {
  return std::max({aw_hs, aw_to_wvalid, w_first_hs, w_per_word * max_len, wlast_to_bvalid, b_hs, ar_hs, ar_to_rvalid,
                   r_per_word * max_len, r_resp});
}

void StageBudgets::validate() const {
  for (Cycle c : {aw_hs, aw_to_wvalid, w_first_hs, w_per_word, wlast_to_bvalid, b_hs, ar_hs, ar_to_rvalid, r_per_word,
                  r_resp})
    if (c < 1) throw sim::ConfigError("stage budgets must be >= 1 cycle");
}

IdRemap::IdRemap(unsigned num_slots) : owner_(num_slots) {
  if (num_slots < 1) throw sim::ConfigError("ID remapper needs at least one slot");
}

std::optional<unsigned> IdRemap::lookup(std::uint32_t ext) const {
  for (unsigned i = 0; i < owner_.size(); ++i)
    if (owner_[i] == ext) return i;
  return std::nullopt;
}

std::optional<unsigned> IdRemap::map(std::uint32_t ext) {
  if (auto s = lookup(ext)) return s;
  for (unsigned i = 0; i < owner_.size(); ++i)
    if (!owner_[i]) {
      owner_[i] = ext;
      return i;
    }
  return std::nullopt;
}

void IdRemap::release(std::uint32_t ext) {
  if (auto s = lookup(ext)) owner_[*s].reset();
}

std::size_t IdRemap::used() const {
  return static_cast<std::size_t>(std::count_if(owner_.begin(), owner_.end(), [](const auto& o) { return o.has_value(); }));
}

Dotq::Dotq(Direction dir, unsigned num_slots, unsigned per_tid, StageBudgets budgets)
    : dir_(dir), per_tid_(per_tid), budgets_(budgets), remap_(num_slots), ht_(num_slots) {
  if (per_tid < 1) throw sim::ConfigError("per-TID capacity must be >= 1");
  budgets_.validate();
  ld_.resize(std::size_t{num_slots} * per_tid);
  clear();
}

void Dotq::clear() {
  for (auto& e : ld_) e = LdEntry{};
  for (auto& h : ht_) h = HtEntry{};
  free_.clear();
  for (int i = static_cast<int>(ld_.size()) - 1; i >= 0; --i) free_.push_back(i);
  wr_.clear();
  remap_ = IdRemap(static_cast<unsigned>(ht_.size()));
  live_ = 0;
}

bool Dotq::can_insert(std::uint32_t ext) const {
  if (free_.empty()) return false;
  if (auto s = remap_.lookup(ext)) return ht_[*s].outstanding < per_tid_;
  return remap_.has_free();
}

int Dotq::insert(const protocol::TxnDescriptor& txn, std::uint32_t ext, std::uint32_t manager, Cycle now) {
  if (!can_insert(ext)) throw sim::SimulationFault("DOTQ insert without capacity");
  const unsigned slot = *remap_.map(ext);
  const int i = free_.back();
  free_.pop_back();
  LdEntry& e = at(i);
  e = LdEntry{};
  e.used = true;
  e.ext = ext;
  e.slot = slot;
  e.ref = txn.id;
  e.tid = txn.tid.value();
  e.manager = manager;
  e.addr = txn.addr;
  e.len = txn.len_beats;
  e.seq = seq_++;
  advance(i, Stage::AxHs, now);

  HtEntry& h = ht_[slot];
  if (h.tail >= 0) at(h.tail).next = i;
  else h.head = i;
  h.tail = i;
  ++h.outstanding;
  if (dir_ == Direction::Write) wr_.push_back(i);
  ++live_;
  return i;
}

int Dotq::head(std::uint32_t ext) const {
  auto s = remap_.lookup(ext);
  return s ? ht_[*s].head : -1;
}

void Dotq::advance(int i, Stage s, Cycle now) {
  LdEntry& e = at(i);
  e.stage = s;
  e.stage_start = now;
  e.stage_budget = budgets_.budget(dir_, s, e.len);
  if (record_) events_.push_back({e.ref, s, now});
}

void Dotq::w_beat(Cycle now) {
  if (wr_.empty()) return;
  LdEntry& e = at(wr_.front());
  if (++e.beats < e.len) return;
  wr_.pop_front();
  if (!wr_.empty() && at(wr_.front()).stage == Stage::AwToWvalid) at(wr_.front()).stage_start = now + 1;
}

void Dotq::retire(int i, Cycle now) {
  LdEntry& e = at(i);
  HtEntry& h = ht_[e.slot];
  if (h.head != i) throw sim::SimulationFault("DOTQ retire out of chain order");
  h.head = e.next;
  if (--h.outstanding == 0) {
    h.tail = -1;
    remap_.release(e.ext);
  } else {
    LdEntry& n = at(h.head);
    if (n.stage == Stage::ArToRvalid || n.stage == Stage::WlastToBvalid) n.stage_start = now + 1;
  }
  std::erase(wr_, i);
  e = LdEntry{};
  free_.push_back(i);
  --live_;
}

bool Dotq::running(int i) const {
  const LdEntry& e = at(i);
  switch (e.stage) {
    case Stage::ArToRvalid:
    case Stage::WlastToBvalid: return ht_[e.slot].head == i;
    case Stage::AwToWvalid: return w_owner() == i;
    default: return true;
  }
}

std::optional<int> Dotq::expired(Cycle now) const {
  for (int i : in_order()) {
    const LdEntry& e = at(i);
    if (running(i) && now + 1 - e.stage_start >= e.stage_budget) return i;
  }
  return std::nullopt;
}

std::vector<int> Dotq::in_order() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(ld_.size()); ++i)
    if (at(i).used) out.push_back(i);
  std::sort(out.begin(), out.end(), [&](int a, int b) { return at(a).seq < at(b).seq; });
  return out;
}

}  // namespace realm::erealm
