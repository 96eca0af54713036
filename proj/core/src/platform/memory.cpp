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

#include "realm/platform/memory.hpp"

#include <algorithm>

namespace realm::platform {

using protocol::Channel;
using protocol::ChannelBeat;
using Behavior = FaultInjection::Behavior;

namespace {
// Added to a TID value to produce an identifier nobody issued.
constexpr std::uint32_t kTidPerturb = 0x80;
}  // namespace

Memory::Memory(SubordinateSpec spec) : sim::Component(spec.name), spec_(std::move(spec)), plan_(spec_.fault) {
  if (spec_.fixed_latency < 1) throw sim::ConfigError(name() + ": fixed_latency must be >= 1");
  if (spec_.beats_per_cycle != 1) throw sim::ConfigError(name() + ": only 1 beat per cycle is modeled");
  if (spec_.queue_capacity < 1) throw sim::ConfigError(name() + ": queue_capacity must be >= 1");
  if (spec_.min_occupancy < 1) throw sim::ConfigError(name() + ": min_occupancy must be >= 1");
}

bool Memory::idle() const { return queue_.empty() && rpipe_.empty() && bpipe_.empty() && !wactive_; }

bool Memory::stalled(Cycle now) const {
  if (!fault_active_ || !plan_) return false;
  if (plan_->behavior == Behavior::StallForever) return true;
  return plan_->behavior == Behavior::StallFor && now < stall_until_;
}

void Memory::evaluate(Cycle now) {
  if (just_reset_) {
    // outputs pending at the reset pulse are dropped on purpose
    port_.r.withdraw();
    port_.b.withdraw();
  }
  const bool stall = stalled(now);
  if (stall) {
    port_.ar.set_ready(false);
    port_.aw.set_ready(false);
    port_.w.set_ready(false);
  } else {
    const bool room = queue_.size() < spec_.queue_capacity;
    const bool ar = port_.ar.valid();
    const bool aw = port_.aw.valid();
    pick_write_ = (ar && aw) ? accept_write_next_ : aw;
    port_.ar.set_ready(room && !pick_write_);
    port_.aw.set_ready(room && pick_write_);
    port_.w.set_ready(wactive_ && wactive_->received < wactive_->req.txn.len_beats && now > wactive_->issued);
  }

  // a presented response stays up until taken, stalled or not
  const bool corrupt = fault_active_ && plan_ && plan_->behavior == Behavior::WrongTidResponse;
  if (r_out_) {
    port_.r.drive(*r_out_);
  } else if (!stall && !rpipe_.empty() && rpipe_.front().at <= now) {
    ChannelBeat b = rpipe_.front().beat;
    if (corrupt) b.tid = protocol::Tid{b.tid->value() + kTidPerturb};
    port_.r.drive(b);
  } else {
    port_.r.idle();
  }

  b_extra_ = false;
  if (b_out_) {
    port_.b.drive(*b_out_);
    b_extra_ = b_out_extra_;
  } else if (stall) {
    port_.b.idle();
  } else if (!bpipe_.empty() && bpipe_.front().at <= now) {
    ChannelBeat b = bpipe_.front().beat;
    if (corrupt) b.tid = protocol::Tid{b.tid->value() + kTidPerturb};
    port_.b.drive(b);
  } else if (extra_pending_ && wactive_) {
    // response for a write whose data is still arriving
    ChannelBeat b;
    b.channel = Channel::B;
    b.txn_ref = wactive_->req.txn.id;
    b.tid = wactive_->req.txn.tid;
    b.manager = wactive_->req.manager;
    port_.b.drive(b);
    b_extra_ = true;
  } else {
    port_.b.idle();
  }
}

void Memory::arm_after_beats(Direction d, unsigned ordinal, unsigned beats_done, Cycle now) {
  if (!plan_ || fault_active_ || plan_->trigger != FaultInjection::Trigger::AfterBeats) return;
  if (plan_->direction != d || plan_->nth != ordinal || plan_->after_beats != beats_done) return;
  fault_active_ = true;
  fault_cycle_ = now + 1;
  stall_until_ = now + 1 + plan_->stall_cycles;
  extra_pending_ = plan_->behavior == Behavior::ExtraHandshake;
}

void Memory::do_reset() {
  queue_.clear();
  rpipe_.clear();
  bpipe_.clear();
  wactive_.reset();
  plan_.reset();
  fault_active_ = false;
  extra_pending_ = false;
  accept_write_next_ = false;
  r_out_.reset();
  b_out_.reset();
  b_out_extra_ = false;
}

void Memory::issue(Cycle now) {
  if (wactive_ || queue_.empty() || port_free_ > now || stalled(now)) return;
  Request req = std::move(queue_.front());
  queue_.pop_front();
  const auto& t = req.txn;
  const Cycle hold = std::max<Cycle>(t.len_beats, spec_.min_occupancy);
  if (t.is_read()) {
    for (std::uint16_t k = 0; k < t.len_beats; ++k) {
      ChannelBeat b;
      b.channel = Channel::R;
      b.txn_ref = t.id;
      b.tid = t.tid;
      b.beat_index = k;
      b.is_last = k + 1 == t.len_beats;
      b.manager = req.manager;
      rpipe_.push_back({now + spec_.fixed_latency + k, b, req.ordinal});
    }
  } else {
    wactive_ = ActiveWrite{std::move(req), now};
  }
  port_free_ = now + hold;
}

void Memory::commit(Cycle now) {
  just_reset_ = false;
  r_out_.reset();
  b_out_.reset();
  if (port_.r.valid() && !port_.r.fired()) r_out_ = port_.r.payload();
  if (port_.b.valid() && !port_.b.fired()) {
    b_out_ = port_.b.payload();
    b_out_extra_ = b_extra_;
  }
  if (reset_requested_) {
    do_reset();
    ++resets_;
    reset_requested_ = false;
    just_reset_ = true;
    port_free_ = now + 1;
    return;
  }

  if (plan_ && !fault_active_ && plan_->trigger == FaultInjection::Trigger::AtCycle && now + 1 >= plan_->at_cycle) {
    fault_active_ = true;
    fault_cycle_ = std::max(now + 1, plan_->at_cycle);
    stall_until_ = *fault_cycle_ + plan_->stall_cycles;
    extra_pending_ = plan_->behavior == Behavior::ExtraHandshake;
  }

  if (port_.ar.fired()) {
    const auto& beat = port_.ar.payload();
    queue_.push_back({*beat.request, beat.manager, read_ordinal_});
    ++accepted_;
    accept_write_next_ = true;
    arm_after_beats(Direction::Read, read_ordinal_++, 0, now);
  } else if (port_.aw.fired()) {
    const auto& beat = port_.aw.payload();
    queue_.push_back({*beat.request, beat.manager, write_ordinal_});
    ++accepted_;
    accept_write_next_ = false;
    arm_after_beats(Direction::Write, write_ordinal_++, 0, now);
  }

  const bool corrupting = fault_active_ && plan_ && plan_->behavior == Behavior::WrongTidResponse;
  if (port_.r.fired()) {
    const Scheduled s = rpipe_.front();
    rpipe_.pop_front();
    if (corrupting) {
      fault_active_ = false;
      plan_.reset();
    }
    arm_after_beats(Direction::Read, s.ordinal, s.beat.beat_index + 1u, now);
  }

  if (port_.b.fired()) {
    if (b_extra_) {
      extra_pending_ = false;
      fault_active_ = false;
      plan_.reset();
    } else {
      bpipe_.pop_front();
      if (corrupting) {
        fault_active_ = false;
        plan_.reset();
      }
    }
  }

  if (port_.w.fired() && wactive_) {
    ActiveWrite& w = *wactive_;
    ++w.received;
    arm_after_beats(Direction::Write, w.req.ordinal, w.received, now);
    if (w.received == w.req.txn.len_beats) {
      ChannelBeat b;
      b.channel = Channel::B;
      b.txn_ref = w.req.txn.id;
      b.tid = w.req.txn.tid;
      b.manager = w.req.manager;
      const Cycle due = std::max<Cycle>(now + 1, w.issued + spec_.fixed_latency + w.req.txn.len_beats - 1);
      bpipe_.push_back({due, b, w.req.ordinal});
      port_free_ = std::max<Cycle>(port_free_, now + 1);
      wactive_.reset();
    }
  }

  issue(now);
}

}  // namespace realm::platform
