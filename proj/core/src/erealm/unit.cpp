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


#include "realm/erealm/unit.hpp"

#include <algorithm>

namespace realm::erealm {

using protocol::Channel;
using protocol::ChannelBeat;

std::string_view to_string(FaultCause c) {
  switch (c) {
    case FaultCause::Timeout: return "timeout";
    case FaultCause::TidMismatch: return "tid_mismatch";
    case FaultCause::SuperfluousHandshake: return "superfluous_handshake";
    case FaultCause::Protocol: return "protocol";
  }
  return "?";
}

namespace {

template <class In, class Out>
void pass(In& in, Out& out, bool allow) {
  if (allow && in.valid()) out.drive(in.payload());
  else out.idle();
  in.set_ready(allow && out.ready());
}

bool stage_in(Stage s, std::initializer_list<Stage> set) { return std::find(set.begin(), set.end(), s) != set.end(); }

}  // namespace

Unit::Unit(std::string name, UnitConfig cfg)
    : sim::Component(std::move(name)),
      cfg_(cfg),
      enabled_(cfg.enable),
      reads_(Direction::Read, cfg.num_slots, cfg.per_tid, cfg.budgets),
      writes_(Direction::Write, cfg.num_slots, cfg.per_tid, cfg.budgets) {
  validate(cfg_);
}

void Unit::validate(const UnitConfig& c) const {
  if (c.reset_latency < 1 || c.reset_latency > 2)
    throw sim::ConfigError(name() + ": reset latency must be 1 or 2 cycles");
  if (c.num_slots < 1 || c.per_tid < 1) throw sim::ConfigError(name() + ": DOTQ capacity must be >= 1");
  c.budgets.validate();
}

void Unit::configure(UnitConfig cfg) {
  validate(cfg);
  pending_cfg_ = cfg;
}

std::optional<FaultRecord> Unit::read_fault() {
  if (read_pos_ >= log_.size()) return std::nullopt;
  return log_[read_pos_++];
}

std::uint32_t Unit::ext_of(const ChannelBeat& b) {
  return ((b.manager & 0xffffu) << 16) | (b.tid ? b.tid->value() & 0xffffu : 0u);
}

bool Unit::drained() const {
  return pass_reads_ == 0 && pass_writes_ == 0 && pass_w_owed_ == 0 && !ar_out_ && !aw_out_ && !w_out_ &&
         reads_.size() == 0 && writes_.size() == 0;
}

void Unit::evaluate(Cycle) {
  if (recovery_) eval_recovery();
  else if (enabled_) eval_tracking();
  else eval_wires();
}

void Unit::eval_wires() {
  const bool hold = pending_cfg_.has_value();
  pass(up_.ar, down_.ar, !hold || ar_out_);
  pass(up_.aw, down_.aw, !hold || aw_out_);
  pass(up_.w, down_.w, !hold || pass_w_owed_ > 0 || w_out_ || aw_out_);
  pass(down_.r, up_.r, true);
  pass(down_.b, up_.b, true);
}

void Unit::eval_tracking() {
  const bool hold = pending_cfg_.has_value();
  auto ax = [&](sim::InPort& in, sim::OutPort& out, const Dotq& q, int pending) {
    const bool ok = in.valid() && (pending >= 0 || (!hold && q.can_insert(ext_of(in.payload()))));
    if (ok || !in.valid()) pass(in, out, true);
    else pass(in, out, false);
  };
  ax(up_.ar, down_.ar, reads_, ar_pending_);
  ax(up_.aw, down_.aw, writes_, aw_pending_);
  // W may run ahead of its AW on the wire; it waits here until the AW is seen.
  pass(up_.w, down_.w, writes_.w_owner() >= 0);
  // Responses are matched by ID alone, so a forwarded beat belongs to the
  // oldest outstanding transaction with that ID, whatever the subordinate meant.
  auto resp = [&](sim::InPort& in, sim::OutPort& out, const Dotq& q, bool bad) {
    if (bad || !in.valid()) return pass(in, out, !bad);
    ChannelBeat b = in.payload();
    b.txn_ref = q.at(q.head(ext_of(b))).ref;
    out.drive(b);
    in.set_ready(out.ready());
  };
  resp(down_.r, up_.r, reads_, down_.r.valid() && check_r(down_.r.payload()));
  resp(down_.b, up_.b, writes_, down_.b.valid() && check_b(down_.b.payload()));
}

void Unit::eval_recovery() {
  down_.ar.withdraw();
  down_.aw.withdraw();
  down_.w.withdraw();
  down_.r.set_ready(false);
  down_.b.set_ready(false);

  up_.ar.set_ready(true);
  up_.aw.set_ready(true);
  up_.w.set_ready(std::any_of(owed_w_.begin(), owed_w_.end(), [](const Owed& o) { return o.next > 0; }));

  if (r_hold_) up_.r.drive(*r_hold_);
  else if (!owed_r_.empty()) up_.r.drive(owed_r_beat(owed_r_.front()));
  else up_.r.idle();

  if (b_hold_) up_.b.drive(*b_hold_);
  else if (!owed_w_.empty() && owed_w_.front().next == 0) up_.b.drive(owed_b_beat(owed_w_.front()));
  else up_.b.idle();
}

ChannelBeat Unit::owed_r_beat(const Owed& o) const {
  ChannelBeat b;
  b.channel = Channel::R;
  b.txn_ref = o.ref;
  b.tid = protocol::Tid{o.tid};
  b.beat_index = o.next;
  b.is_last = o.next + 1 == o.len;
  b.resp = o.resp;
  b.manager = o.manager;
  return b;
}

ChannelBeat Unit::owed_b_beat(const Owed& o) const {
  ChannelBeat b;
  b.channel = Channel::B;
  b.txn_ref = o.ref;
  b.tid = protocol::Tid{o.tid};
  b.resp = o.resp;
  b.manager = o.manager;
  return b;
}

std::optional<FaultRecord> Unit::check_r(const ChannelBeat& b) const {
  const std::uint32_t ext = ext_of(b);
  FaultRecord f;
  f.direction = Direction::Read;
  f.ext_tid = ext;
  const int i = reads_.head(ext);
  if (i < 0) {
    f.cause = FaultCause::TidMismatch;
    return f;
  }
  const LdEntry& e = reads_.at(i);
  f.slot = e.slot;
  f.addr = e.addr;
  f.stage = e.stage;
  f.stage_start = e.stage_start;
  if (!stage_in(e.stage, {Stage::ArToRvalid, Stage::RFirstToLast, Stage::RResp})) {
    f.cause = FaultCause::SuperfluousHandshake;
    return f;
  }
  if (b.is_last != (e.beats + 1 == e.len)) {
    f.cause = FaultCause::Protocol;
    return f;
  }
  return std::nullopt;
}

std::optional<FaultRecord> Unit::check_b(const ChannelBeat& b) const {
  const std::uint32_t ext = ext_of(b);
  FaultRecord f;
  f.direction = Direction::Write;
  f.ext_tid = ext;
  const int i = writes_.head(ext);
  if (i < 0) {
    f.cause = FaultCause::TidMismatch;
    return f;
  }
  const LdEntry& e = writes_.at(i);
  f.slot = e.slot;
  f.addr = e.addr;
  f.stage = e.stage;
  f.stage_start = e.stage_start;
  if (!stage_in(e.stage, {Stage::WlastToBvalid, Stage::BHs})) {
    f.cause = FaultCause::SuperfluousHandshake;
    return f;
  }
  return std::nullopt;
}

void Unit::commit(Cycle now) {
  if (recovery_) commit_recovery(now);
  else if (enabled_) commit_tracking(now);
  else commit_wires();

  if (irq_due_ && now >= detected_) {
    irq_due_ = false;
    irq_ = true;
    irq_cycle_ = now + 1;
  }
  bool pulse = want_reset_;
  want_reset_ = false;
  if (reset_due_ && now >= detected_ + cfg_.reset_latency) {
    reset_due_ = false;
    pulse = true;
  }
  if (pulse) {
    if (reset_line_) reset_line_();
    reset_cycles_.push_back(now);
  }

  if (pending_cfg_ && !recovery_ && drained()) {
    cfg_ = *pending_cfg_;
    pending_cfg_.reset();
    enabled_ = cfg_.enable;
    reads_ = Dotq(Direction::Read, cfg_.num_slots, cfg_.per_tid, cfg_.budgets);
    writes_ = Dotq(Direction::Write, cfg_.num_slots, cfg_.per_tid, cfg_.budgets);
  }
}

void Unit::commit_wires() {
  ar_out_ = down_.ar.valid() && !down_.ar.ready();
  aw_out_ = down_.aw.valid() && !down_.aw.ready();
  w_out_ = down_.w.valid() && !down_.w.ready();
  if (down_.ar.fired()) ++pass_reads_;
  if (down_.aw.fired()) {
    ++pass_writes_;
    pass_w_owed_ += down_.aw.payload().request->len_beats;
  }
  if (down_.w.fired()) --pass_w_owed_;
  if (up_.r.fired() && up_.r.payload().is_last) --pass_reads_;
  if (up_.b.fired()) --pass_writes_;
}

void Unit::commit_tracking(Cycle now) {
  auto ax = [&](sim::OutPort& out, Dotq& q, int& pending) {
    if (!out.valid()) return -1;
    if (pending < 0) pending = q.insert(*out.payload().request, ext_of(out.payload()), out.payload().manager, now);
    if (!out.fired()) return -1;
    const int i = pending;
    pending = -1;
    return i;
  };
  if (int i = ax(down_.ar, reads_, ar_pending_); i >= 0) reads_.advance(i, Stage::ArToRvalid, now);
  if (int i = ax(down_.aw, writes_, aw_pending_); i >= 0) {
    const LdEntry& e = writes_.at(i);
    writes_.advance(i, e.beats == e.len ? Stage::WlastToBvalid : e.beats > 0 ? Stage::WFirstToLast : Stage::AwToWvalid,
                    now);
  }

  if (down_.w.valid()) {
    const int o = writes_.w_owner();
    LdEntry& e = writes_.at(o);
    if (e.stage == Stage::AwToWvalid) writes_.advance(o, Stage::WFirstHs, now);
    if (down_.w.fired()) {
      if (stage_in(e.stage, {Stage::AwToWvalid, Stage::WFirstHs})) writes_.advance(o, Stage::WFirstToLast, now);
      writes_.w_beat(now);
      if (e.beats == e.len && e.stage != Stage::AxHs) writes_.advance(o, Stage::WlastToBvalid, now);
    }
  }

  if (down_.r.valid()) {
    const ChannelBeat& b = down_.r.payload();
    if (auto f = check_r(b)) {
      f->cycle = now;
      raise(*f, now);
      return;
    }
    const int i = reads_.head(ext_of(b));
    LdEntry& e = reads_.at(i);
    if (e.stage == Stage::ArToRvalid) reads_.advance(i, Stage::RFirstToLast, now);
    if (b.is_last && e.stage == Stage::RFirstToLast) reads_.advance(i, Stage::RResp, now);
    if (down_.r.fired() && ++e.beats == e.len) reads_.retire(i, now);
  }

  if (down_.b.valid()) {
    const ChannelBeat& b = down_.b.payload();
    if (auto f = check_b(b)) {
      f->cycle = now;
      raise(*f, now);
      return;
    }
    const int i = writes_.head(ext_of(b));
    if (writes_.at(i).stage == Stage::WlastToBvalid) writes_.advance(i, Stage::BHs, now);
    if (down_.b.fired()) writes_.retire(i, now);
  }

  max_tracked_ = std::max(max_tracked_, std::max(reads_.size(), writes_.size()));

  for (Dotq* q : {&reads_, &writes_}) {
    if (auto i = q->expired(now)) {
      const LdEntry& e = q->at(*i);
      raise({.cause = FaultCause::Timeout,
             .direction = q->direction(),
             .ext_tid = e.ext,
             .slot = e.slot,
             .addr = e.addr,
             .stage = e.stage,
             .stage_start = e.stage_start,
             .cycle = now + 1},
            now);
      return;
    }
  }
}

void Unit::raise(FaultRecord f, Cycle now) {
  log_.push_back(f);
  detected_ = f.cycle;
  irq_due_ = true;
  enter_recovery(now);
}

void Unit::enter_recovery(Cycle) {
  recovery_ = true;
  reset_due_ = cfg_.auto_reset;
  if (up_.r.valid() && !up_.r.ready()) r_hold_ = up_.r.payload();
  if (up_.b.valid() && !up_.b.ready()) b_hold_ = up_.b.payload();

  auto owe = [](Dotq& q, std::deque<Owed>& out, bool read) {
    for (int i : q.in_order()) {
      const LdEntry& e = q.at(i);
      if (e.stage == Stage::AxHs) continue;  // never accepted; answered like a new request
      out.push_back({e.ref, e.tid, e.manager, e.len,
                     static_cast<std::uint16_t>(read ? e.beats : e.len - e.beats), Resp::SlvErr});
    }
    q.clear();
  };
  owe(reads_, owed_r_, true);
  owe(writes_, owed_w_, false);
  ar_pending_ = aw_pending_ = -1;

  auto to_front = [](std::deque<Owed>& q, TxnRef ref) {
    auto it = std::find_if(q.begin(), q.end(), [&](const Owed& o) { return o.ref == ref; });
    if (it == q.end() || it == q.begin()) return;
    Owed o = *it;
    q.erase(it);
    q.push_front(o);
  };
  if (r_hold_) to_front(owed_r_, r_hold_->txn_ref);
  if (b_hold_) to_front(owed_w_, b_hold_->txn_ref);
}

void Unit::commit_recovery(Cycle) {
  if (up_.ar.fired()) {
    const auto& t = *up_.ar.payload().request;
    owed_r_.push_back({t.id, t.tid.value(), up_.ar.payload().manager, t.len_beats, 0, Resp::DecErr});
  }
  if (up_.aw.fired()) {
    const auto& t = *up_.aw.payload().request;
    owed_w_.push_back({t.id, t.tid.value(), up_.aw.payload().manager, t.len_beats, t.len_beats, Resp::DecErr});
  }
  if (up_.w.fired()) {
    auto it = std::find_if(owed_w_.begin(), owed_w_.end(), [](const Owed& o) { return o.next > 0; });
    if (it != owed_w_.end()) --it->next;
  }
  if (up_.r.fired()) {
    if (r_hold_) r_hold_.reset();
    else ++synthesized_;
    if (!owed_r_.empty() && ++owed_r_.front().next == owed_r_.front().len) owed_r_.pop_front();
  }
  if (up_.b.fired()) {
    if (b_hold_) b_hold_.reset();
    else ++synthesized_;
    if (!owed_w_.empty()) owed_w_.pop_front();
  }

  if (want_clear_ && !reset_due_ && owed_r_.empty() && owed_w_.empty() && !r_hold_ && !b_hold_) {
    want_clear_ = false;
    recovery_ = false;
    irq_ = false;
    irq_due_ = false;
  }
}

}  // namespace realm::erealm
