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

#include "realm/irealm/unit.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace realm::irealm {

using protocol::Channel;

Unit::Unit(std::string name, UnitConfig cfg, bool bypass)
    : sim::Component(std::move(name)), cfg_(std::move(cfg)), bypass_(bypass), want_bypass_(bypass) {
  validate(cfg_);
  table_ = RegionTable(cfg_.regions, cfg_.default_fragment_beats);
  activate();
}

void Unit::validate(const UnitConfig& cfg) const {
  RegionTable check(cfg.regions, cfg.default_fragment_beats);
  if (cfg.max_outstanding < 1) throw sim::ConfigError(name() + ": max_outstanding must be >= 1");
  if (!cfg.write_buffer) return;
  unsigned g = cfg.default_fragment_beats;
  for (const auto& r : cfg.regions) g = std::max<unsigned>(g, r.fragment_beats);
  if (cfg.buffer_depth_beats < g)
    throw sim::ConfigError(
        fmt::format("{}: write buffer of {} beats cannot hold a {}-beat fragment", name(), cfg.buffer_depth_beats, g));
}

void Unit::configure(UnitConfig cfg) {
  validate(cfg);
  pending_cfg_ = std::move(cfg);
}

void Unit::activate() {
  budgets_.assign(table_.size(), BudgetState{});
  for (std::size_t i = 0; i < budgets_.size(); ++i) renew(table_.region(i), budgets_[i]);
  probes_.resize(table_.size());
  isolated_ = false;
}

std::size_t Unit::in_flight() const {
  if (bypass_) return pass_reads_ + pass_writes_;
  return reads_.size() + writes_.size() + (rsplit_ && rsplit_->reject) + (wsplit_ && wsplit_->reject);
}

bool Unit::drained() const {
  if (ar_held_ || aw_held_) return false;
  if (bypass_) return pass_reads_ == 0 && pass_writes_ == 0 && pass_w_owed_ == 0 && !w_held_;
  return !rsplit_ && !wsplit_ && reads_.empty() && writes_.empty() && wlabel_.empty() && aw_slots_.empty() &&
         wfifo_.empty() && wsend_.empty();
}

Unit::Split Unit::make_split(const TxnDescriptor& t) const {
  const std::uint16_t g = table_.region(region_of(t)).fragment_beats;
  const bool reject = must_reject(t, g);
  return Split{t, g, 0, reject ? std::uint16_t{0} : fragment_count(t.len_beats, g), reject};
}

bool Unit::gate(const TxnDescriptor& frag, std::uint64_t reserved, unsigned extra_out) const {
  if (isolated_ || isolate_now_) return false;
  if (cfg_.throttle) {
    unsigned level = 0;
    for (const auto& b : budgets_) level = std::max(level, b.throttle_level);
    if (frag_out_ + extra_out >= throttle_cap(cfg_.max_outstanding, level)) return false;
  }
  const std::size_t r = region_of(frag);
  return can_charge(table_.region(r), budgets_[r], frag.len_beats, reserved);
}

std::optional<Unit::Labeled> Unit::label_w(const ChannelBeat& in) const {
  WLabel head;
  if (!wlabel_.empty()) {
    head = wlabel_.front();
  } else if (up_.aw.fired()) {
    const Split s = make_split(*up_.aw.payload().request);
    head = WLabel{s.orig.id, s.orig.len_beats, s.g, s.reject};
  } else {
    return std::nullopt;
  }
  Labeled out{in, head.reject};
  if (head.reject) return out;
  const auto idx = static_cast<std::uint16_t>(head.seen / head.g);
  const auto pos = static_cast<std::uint16_t>(head.seen % head.g);
  const auto flen = static_cast<std::uint16_t>(std::min<unsigned>(head.g, head.len - idx * head.g));
  out.beat.txn_ref = protocol::fragment_ref(head.ref, idx);
  out.beat.beat_index = pos;
  out.beat.is_last = pos + 1 == flen;
  return out;
}

void Unit::evaluate(sim::Cycle /*now*/) {
  if (bypass_) {
    eval_bypass();
  } else {
    eval_active();
  }
}

void Unit::eval_bypass() {
  const bool stall = want_bypass_ != bypass_;
  auto pass = [](sim::InPort& in, sim::OutPort& out, bool blocked) {
    if (in.valid() && !blocked) {
      out.drive(in.payload());
    } else {
      out.idle();
    }
    in.set_ready(!blocked && out.ready());
  };
  pass(up_.ar, down_.ar, stall && !ar_held_);
  pass(up_.aw, down_.aw, stall && !aw_held_);
  // while draining, data for requests still held back must not reach the subordinate
  pass(up_.w, down_.w, stall && pass_w_owed_ <= 0 && !w_held_);
  pass(down_.r, up_.r, false);
  pass(down_.b, up_.b, false);
}

void Unit::eval_active() {
  const bool stall = want_bypass_ != bypass_;

  // AR: splitter register, or fall-through of a fresh request
  up_.ar.set_ready(!rsplit_ && !stall);
  ar_frag_.reset();
  std::optional<Split> rs = rsplit_;
  if (!rs && up_.ar.valid() && !stall) rs = make_split(*up_.ar.payload().request);
  if (rs && !rs->reject && rs->emitted < rs->count) {
    TxnDescriptor f = fragment_at(rs->orig, rs->g, rs->emitted);
    if (ar_held_ || gate(f, 0, aw_held_ ? 1 : 0)) ar_frag_ = f;
  }
  if (ar_frag_) {
    down_.ar.drive(protocol::make_ax_beat(*ar_frag_));
  } else {
    down_.ar.idle();
  }

  // AW: from the write buffer once the fragment's data is resident, else from the splitter
  up_.aw.set_ready(!wsplit_ && !stall);
  aw_frag_.reset();
  std::optional<TxnDescriptor> cand;
  if (cfg_.write_buffer) {
    if (!aw_slots_.empty()) {
      const TxnDescriptor& head = aw_slots_.front();
      const auto resident = std::count_if(wfifo_.begin(), wfifo_.end(),
                                          [&](const ChannelBeat& b) { return b.txn_ref == head.id; });
      if (resident == head.len_beats) cand = head;
    }
  } else {
    std::optional<Split> ws = wsplit_;
    if (!ws && up_.aw.valid() && !stall) ws = make_split(*up_.aw.payload().request);
    if (ws && !ws->reject && ws->emitted < ws->count) cand = fragment_at(ws->orig, ws->g, ws->emitted);
  }
  if (cand) {
    std::uint64_t reserved = 0;
    if (ar_frag_ && !ar_held_ && region_of(*ar_frag_) == region_of(*cand)) reserved = ar_frag_->len_beats;
    if (aw_held_ || gate(*cand, reserved, ar_frag_ || ar_held_ ? 1 : 0)) aw_frag_ = cand;
  }
  if (aw_frag_) {
    down_.aw.drive(protocol::make_ax_beat(*aw_frag_));
  } else {
    down_.aw.idle();
  }

  // W: data follows its fragment's AW, never ahead of it
  auto w_allowed = [&](protocol::TxnRef ref) {
    if (!wsend_.empty()) return wsend_.front().ref == ref;
    return down_.aw.fired() && down_.aw.payload().txn_ref == ref;
  };
  std::optional<Labeled> lab;
  if (up_.w.valid()) lab = label_w(up_.w.payload());
  if (cfg_.write_buffer) {
    if (!wfifo_.empty() && w_allowed(wfifo_.front().txn_ref)) {
      down_.w.drive(wfifo_.front());
    } else {
      down_.w.idle();
    }
    up_.w.set_ready(lab && (lab->reject || wfifo_.size() < cfg_.buffer_depth_beats));
  } else {
    const bool fwd = lab && !lab->reject && w_allowed(lab->beat.txn_ref);
    if (fwd) {
      down_.w.drive(lab->beat);
    } else {
      down_.w.idle();
    }
    up_.w.set_ready(lab && (lab->reject || (fwd && down_.w.ready())));
  }

  // R: renumber fragment beats into the original burst; the error path answers rejected reads
  r_err_ = rsplit_ && rsplit_->reject && reads_.empty();
  if (r_err_) {
    const TxnDescriptor& o = rsplit_->orig;
    ChannelBeat b;
    b.channel = Channel::R;
    b.txn_ref = o.id;
    b.tid = o.tid;
    b.beat_index = rsplit_->err_beats;
    b.is_last = rsplit_->err_beats + 1 == o.len_beats;
    b.resp = Resp::SlvErr;
    b.manager = o.manager_id;
    up_.r.drive(b);
    down_.r.set_ready(false);
  } else if (down_.r.valid()) {
    ChannelBeat b = down_.r.payload();
    auto it = reads_.find(protocol::original_ref(b.txn_ref));
    if (it != reads_.end()) {
      b.txn_ref = it->first;
      b.beat_index = it->second.beats;
      b.is_last = it->second.beats + 1 == it->second.len;
    }
    up_.r.drive(b);
    down_.r.set_ready(up_.r.ready());
  } else {
    up_.r.idle();
    down_.r.set_ready(up_.r.ready());
  }

  // B: fragment responses are absorbed until the last one, which carries the worst
  b_err_ = wsplit_ && wsplit_->reject && wsplit_->err_beats == wsplit_->orig.len_beats && writes_.empty();
  b_absorb_ = false;
  if (b_err_) {
    const TxnDescriptor& o = wsplit_->orig;
    ChannelBeat b;
    b.channel = Channel::B;
    b.txn_ref = o.id;
    b.tid = o.tid;
    b.resp = Resp::SlvErr;
    b.manager = o.manager_id;
    up_.b.drive(b);
    down_.b.set_ready(false);
  } else if (down_.b.valid()) {
    ChannelBeat b = down_.b.payload();
    auto it = writes_.find(protocol::original_ref(b.txn_ref));
    if (it != writes_.end() && it->second.done + 1 < it->second.fragments) {
      b_absorb_ = true;
      up_.b.idle();
      down_.b.set_ready(true);
    } else {
      if (it != writes_.end()) {
        b.txn_ref = it->first;
        b.resp = protocol::worst(it->second.resp, b.resp);
      }
      up_.b.drive(b);
      down_.b.set_ready(up_.b.ready());
    }
  } else {
    up_.b.idle();
    down_.b.set_ready(up_.b.ready());
  }
}

void Unit::complete(protocol::Addr addr, sim::Cycle accepted, sim::Cycle now) {
  probe_complete(probes_[table_.decode(addr)], now - accepted);
}

void Unit::commit_bypass() {
  ar_held_ = down_.ar.valid() && !down_.ar.fired();
  aw_held_ = down_.aw.valid() && !down_.aw.fired();
  w_held_ = down_.w.valid() && !down_.w.fired();
  if (up_.ar.fired()) ++pass_reads_;
  if (up_.aw.fired()) {
    ++pass_writes_;
    pass_w_owed_ += up_.aw.payload().request->len_beats;
  }
  if (up_.w.fired()) --pass_w_owed_;
  if (up_.r.fired() && up_.r.payload().is_last && pass_reads_ > 0) --pass_reads_;
  if (up_.b.fired() && pass_writes_ > 0) --pass_writes_;
}

void Unit::commit_active(sim::Cycle now) {
  // address side
  if (up_.ar.fired()) {
    const TxnDescriptor& t = *up_.ar.payload().request;
    rsplit_ = make_split(t);
    rsplit_->accepted = now;
    if (!rsplit_->reject) reads_.emplace(t.id, ReadTrack{t.len_beats, now, t.addr});
  }
  if (ar_frag_) {
    const std::size_t r = region_of(*ar_frag_);
    if (!ar_held_) charge(table_.region(r), budgets_[r], ar_frag_->len_beats);
    if (down_.ar.fired()) {
      ++frag_out_;
      probe_forward(probes_[r], ar_frag_->len_beats, ar_frag_->beat_bytes);
      if (++rsplit_->emitted == rsplit_->count) rsplit_.reset();
    }
  }
  ar_held_ = ar_frag_ && !down_.ar.fired();

  if (up_.aw.fired()) {
    const TxnDescriptor& t = *up_.aw.payload().request;
    wsplit_ = make_split(t);
    wsplit_->accepted = now;
    wlabel_.push_back({t.id, t.len_beats, wsplit_->g, wsplit_->reject});
    if (!wsplit_->reject) writes_.emplace(t.id, WriteTrack{wsplit_->count, now, t.addr});
  }
  if (aw_frag_) {
    const std::size_t r = region_of(*aw_frag_);
    if (!aw_held_) charge(table_.region(r), budgets_[r], aw_frag_->len_beats);
    if (down_.aw.fired()) {
      ++frag_out_;
      probe_forward(probes_[r], aw_frag_->len_beats, aw_frag_->beat_bytes);
      wsend_.push_back({aw_frag_->id, aw_frag_->len_beats});
      if (cfg_.write_buffer) {
        aw_slots_.pop_front();
      } else if (++wsplit_->emitted == wsplit_->count) {
        wsplit_.reset();
      }
    }
  }
  aw_held_ = aw_frag_ && !down_.aw.fired();
  // the splitter refills the buffer's two AW slots, one fragment per cycle
  if (cfg_.write_buffer && wsplit_ && !wsplit_->reject && aw_slots_.size() < 2) {
    aw_slots_.push_back(fragment_at(wsplit_->orig, wsplit_->g, wsplit_->emitted));
    if (++wsplit_->emitted == wsplit_->count) wsplit_.reset();
  }

  // write data
  if (up_.w.fired()) {
    const auto lab = label_w(up_.w.payload());
    if (lab->reject) {
      ++wsplit_->err_beats;
    } else if (cfg_.write_buffer) {
      wfifo_.push_back(lab->beat);
    }
    if (++wlabel_.front().seen == wlabel_.front().len) wlabel_.pop_front();
  }
  if (down_.w.fired()) {
    if (cfg_.write_buffer) wfifo_.pop_front();
    if (++wsend_.front().sent == wsend_.front().len) wsend_.pop_front();
  }

  // responses
  if (r_err_) {
    if (up_.r.fired() && ++rsplit_->err_beats == rsplit_->orig.len_beats) {
      complete(rsplit_->orig.addr, rsplit_->accepted, now);
      rsplit_.reset();
    }
  } else if (down_.r.fired()) {
    const ChannelBeat& b = down_.r.payload();
    if (b.is_last && frag_out_ > 0) --frag_out_;
    auto it = reads_.find(protocol::original_ref(b.txn_ref));
    if (it != reads_.end() && ++it->second.beats == it->second.len) {
      complete(it->second.addr, it->second.accepted, now);
      reads_.erase(it);
    }
  }
  if (b_err_) {
    if (up_.b.fired()) {
      complete(wsplit_->orig.addr, wsplit_->accepted, now);
      wsplit_.reset();
    }
  } else if (down_.b.fired()) {
    if (frag_out_ > 0) --frag_out_;
    auto it = writes_.find(protocol::original_ref(down_.b.payload().txn_ref));
    if (it != writes_.end()) {
      it->second.resp = protocol::worst(it->second.resp, down_.b.payload().resp);
      if (++it->second.done == it->second.fragments) {
        complete(it->second.addr, it->second.accepted, now);
        writes_.erase(it);
      }
    }
  }

  // periods and isolation
  bool depleted = false;
  for (std::size_t i = 0; i < budgets_.size(); ++i) {
    const RegionConfig& rc = table_.region(i);
    if (tick_period(rc, budgets_[i])) {
      // a fragment still waiting downstream is charged to the new period
      if (ar_held_ && region_of(*ar_frag_) == i) charge(rc, budgets_[i], ar_frag_->len_beats);
      if (aw_held_ && region_of(*aw_frag_) == i) charge(rc, budgets_[i], aw_frag_->len_beats);
    }
    if (cfg_.throttle) track_throttle(rc, budgets_[i]);
    if (rc.limited() && budgets_[i].remaining == 0) depleted = true;
  }
  isolated_ = depleted;
}

void Unit::commit(sim::Cycle now) {
  if (bypass_) {
    commit_bypass();
  } else {
    commit_active(now);
  }
  isolate_now_ = want_isolate_;
  if (pending_cfg_) {
    cfg_ = std::move(*pending_cfg_);
    pending_cfg_.reset();
    table_ = RegionTable(cfg_.regions, cfg_.default_fragment_beats);
    activate();
  }
  if (want_bypass_ != bypass_ && drained()) {
    bypass_ = want_bypass_;
    if (!bypass_) activate();
  }
}

}  // namespace realm::irealm
