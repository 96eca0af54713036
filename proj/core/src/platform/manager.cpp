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

#include "realm/platform/manager.hpp"

#include <algorithm>

namespace realm::platform {

using protocol::Channel;
using protocol::ChannelBeat;
using protocol::Direction;

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

}  // namespace

Manager::Manager(ManagerSpec spec, std::uint32_t id, std::uint64_t seed)
    : sim::Component(spec.name), spec_(std::move(spec)), id_(id), rng_(seed) {
  if (spec_.txn_len_beats < 1 || spec_.txn_len_beats > 256)
    throw sim::ConfigError(name() + ": txn_len_beats must be in [1, 256]");
  if (spec_.beat_bytes == 0 || (spec_.beat_bytes & (spec_.beat_bytes - 1)) != 0)
    throw sim::ConfigError(name() + ": beat_bytes must be a power of two");
  if (spec_.max_outstanding_reads < 1 || spec_.max_outstanding_writes < 1)
    throw sim::ConfigError(name() + ": outstanding caps must be >= 1");
  if (spec_.w_beat_interval < 1) throw sim::ConfigError(name() + ": w_beat_interval must be >= 1");

  switch (spec_.kind) {
    case ManagerKind::CoreCopy:
    case ManagerKind::DmaBurst: {
      if (spec_.kind == ManagerKind::CoreCopy && spec_.total_bytes == 0)
        throw sim::ConfigError(name() + ": a core copy needs total_bytes > 0");
      const std::uint64_t beats = ceil_div(spec_.total_bytes, spec_.beat_bytes);
      iteration_goal_ = ceil_div(beats, spec_.txn_len_beats);
      required_ = spec_.traffic == Traffic::Copy ? 2 * iteration_goal_ : iteration_goal_;
      break;
    }
    case ManagerKind::Periodic:
      plan_periodic();
      break;
    case ManagerKind::Random:
      plan_random();
      break;
  }
}

TxnDescriptor Manager::make(Direction d, AddrWindow w, Addr& cursor, std::uint16_t len) {
  const Addr span = Addr{len} * spec_.beat_bytes;
  if (w.size != 0 && cursor + span > w.size) cursor = 0;
  TxnDescriptor t;
  t.id = protocol::make_txn_ref(id_, seq_++);
  t.direction = d;
  t.tid = protocol::Tid{spec_.tid};
  t.addr = w.base + cursor;
  t.len_beats = len;
  t.beat_bytes = spec_.beat_bytes;
  t.manager_id = id_;
  cursor += span;
  return t;
}

void Manager::plan_periodic() {
  if (spec_.activation_period == 0 || spec_.activations == 0 || spec_.bytes_per_activation == 0)
    throw sim::ConfigError(name() + ": periodic schedule needs period, activations and bytes");
  if (spec_.traffic == Traffic::Copy) throw sim::ConfigError(name() + ": periodic schedules are read or write only");
  const std::uint64_t beats = ceil_div(spec_.bytes_per_activation, spec_.beat_bytes);
  const std::uint64_t n = ceil_div(beats, spec_.txn_len_beats);
  const Direction d = spec_.traffic == Traffic::Read ? Direction::Read : Direction::Write;
  auto& q = d == Direction::Read ? reads_ : writes_;
  Addr& cursor = d == Direction::Read ? src_cursor_ : dst_cursor_;
  const AddrWindow w = d == Direction::Read ? spec_.src : spec_.dst;

  for (unsigned k = 0; k < spec_.activations; ++k) {
    const Cycle start = spec_.start_cycle + k * spec_.activation_period;
    activations_.push_back({start, 0, 0, spec_.bytes_per_activation, false});
    activation_left_.push_back(static_cast<unsigned>(n));
    std::uint64_t left = beats;
    for (std::uint64_t j = 0; j < n; ++j) {
      const auto len = static_cast<std::uint16_t>(std::min<std::uint64_t>(left, spec_.txn_len_beats));
      left -= len;
      const Cycle release =
          spec_.pacing == Pacing::Asap ? start : start + j * spec_.activation_period / n;
      q.push_back({make(d, w, cursor, len), release, k});
    }
  }
  required_ = std::uint64_t{spec_.activations} * n;
}

void Manager::plan_random() {
  const RandomTraffic& r = spec_.random;
  if (r.max_len < 1 || r.max_len > 256) throw sim::ConfigError(name() + ": random max_len must be in [1, 256]");
  if (r.num_tids < 1) throw sim::ConfigError(name() + ": random traffic needs at least one TID");
  std::vector<AddrWindow> windows = r.windows;
  if (windows.empty()) windows.push_back(spec_.src);

  std::uniform_int_distribution<Cycle> gap(0, r.max_gap);
  std::uniform_int_distribution<unsigned> len_d(1, r.max_len);
  std::uniform_int_distribution<unsigned> tid_d(0, r.num_tids - 1);
  std::uniform_int_distribution<std::size_t> win_d(0, windows.size() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  Cycle t = spec_.start_cycle;
  for (unsigned i = 0; i < r.txns; ++i) {
    t += gap(rng_);
    const Direction d = u(rng_) < r.write_fraction ? Direction::Write : Direction::Read;
    const AddrWindow w = windows[win_d(rng_)];
    const Addr slots = std::max<Addr>(1, w.size / spec_.beat_bytes);
    const auto len = static_cast<std::uint16_t>(std::min<Addr>(len_d(rng_), slots));
    const Addr offset = std::uniform_int_distribution<Addr>(0, slots - len)(rng_) * spec_.beat_bytes;

    TxnDescriptor txn;
    txn.id = protocol::make_txn_ref(id_, seq_++);
    txn.direction = d;
    txn.tid = protocol::Tid{tid_d(rng_)};
    txn.addr = w.base + offset;
    txn.len_beats = len;
    txn.beat_bytes = spec_.beat_bytes;
    txn.manager_id = id_;
    txn.burst.atomic = u(rng_) < r.atomic_fraction;
    txn.burst.modifiable = !(u(rng_) < r.non_modifiable_fraction);
    (d == Direction::Read ? reads_ : writes_).push_back({txn, t});
  }
  required_ = r.txns;
}

bool Manager::done() const {
  if (unbounded()) return false;
  return ok_ >= required_ && inflight_.empty() && held_.empty();
}

void Manager::release_retries() {
  for (auto it = held_.rbegin(); it != held_.rend(); ++it) {
    (it->txn.is_read() ? reads_ : writes_).push_front(*it);
  }
  held_.clear();
}

void Manager::evaluate(Cycle now) {
  if (ar_cur_) {
    port_.ar.drive(protocol::make_ax_beat(ar_cur_->txn));
  } else {
    port_.ar.idle();
  }
  if (aw_cur_) {
    port_.aw.drive(protocol::make_ax_beat(aw_cur_->txn));
  } else {
    port_.aw.idle();
  }
  if (!wq_.empty() && now >= wq_.front().ready_at && now >= w_next_) {
    const WStream& s = wq_.front();
    ChannelBeat b;
    b.channel = Channel::W;
    b.txn_ref = s.ref;
    b.beat_index = s.sent;
    b.is_last = s.sent + 1 == s.len;
    b.manager = id_;
    port_.w.drive(b);
  } else {
    port_.w.idle();
  }
  port_.r.set_ready(true);
  port_.b.set_ready(true);
}

void Manager::on_complete(InFlight f, Cycle now) {
  (f.txn.is_read() ? rd_out_ : wr_out_) -= 1;
  records_.push_back({f.txn, f.accepted, now, f.resp, f.activation});
  if (f.resp != Resp::Okay) {
    ++errors_;
    if (spec_.retry_on_error) {
      TxnDescriptor again = f.txn;
      again.id = protocol::make_txn_ref(id_, seq_++);
      held_.push_back({again, 0, f.activation, f.iteration});
      return;
    }
  }
  ++ok_;
  bytes_done_ += f.txn.bytes();
  beats_done_ += f.txn.len_beats;

  if (spec_.kind == ManagerKind::Periodic && f.activation < activation_left_.size()) {
    if (--activation_left_[f.activation] == 0) {
      activations_[f.activation].finish = now;
      activations_[f.activation].complete = true;
    }
  }
  if ((spec_.kind == ManagerKind::CoreCopy || spec_.kind == ManagerKind::DmaBurst) &&
      spec_.traffic == Traffic::Copy && f.txn.is_read()) {
    // the data just read is written back out from the next cycle on
    TxnDescriptor w = make(Direction::Write, spec_.dst, dst_cursor_, f.txn.len_beats);
    writes_.push_back({w, now + 1, 0, f.iteration});
  }
  if (!unbounded() && ok_ == required_) finish_ = now;
}

void Manager::refill(Cycle /*now*/) {
  if (spec_.kind != ManagerKind::CoreCopy && spec_.kind != ManagerKind::DmaBurst) return;
  const bool reads = spec_.traffic != Traffic::Write;
  auto& q = reads ? reads_ : writes_;
  if (!q.empty()) return;
  if (iteration_goal_ != 0 && iterations_ >= iteration_goal_) return;
  std::uint16_t len = spec_.txn_len_beats;
  if (iteration_goal_ != 0) {
    const std::uint64_t beats = ceil_div(spec_.total_bytes, spec_.beat_bytes);
    len = static_cast<std::uint16_t>(std::min<std::uint64_t>(len, beats - iterations_ * spec_.txn_len_beats));
  }
  TxnDescriptor t = reads ? make(Direction::Read, spec_.src, src_cursor_, len)
                          : make(Direction::Write, spec_.dst, dst_cursor_, len);
  q.push_back({t, spec_.start_cycle, 0, static_cast<int>(iterations_++)});
}

void Manager::choose_next(Cycle now) {
  const Cycle next = now + 1;
  if (!ar_cur_ && rd_out_ < spec_.max_outstanding_reads && !reads_.empty() && reads_.front().release <= next) {
    ar_cur_ = reads_.front();
    reads_.pop_front();
    ar_cur_->txn.issue_cycle = next;
    ++rd_out_;
  }
  if (!aw_cur_ && wr_out_ < spec_.max_outstanding_writes && !writes_.empty() && writes_.front().release <= next) {
    aw_cur_ = writes_.front();
    writes_.pop_front();
    aw_cur_->txn.issue_cycle = next;
    ++wr_out_;
    wq_.push_back({aw_cur_->txn.id, aw_cur_->txn.len_beats, next + spec_.w_first_delay});
  }
}

void Manager::commit(Cycle now) {
  auto accept = [&](std::optional<Pending>& cur) {
    const Pending& p = *cur;
    inflight_.emplace(p.txn.id, InFlight{p.txn, now, p.activation, p.iteration});
    if (spec_.kind == ManagerKind::Periodic && p.activation < activations_.size()) {
      ActivationRecord& a = activations_[p.activation];
      if (now < a.start + spec_.activation_period) {
        a.bytes_in_window += p.txn.bytes();
        a.deficit = spec_.bytes_per_activation - std::min(spec_.bytes_per_activation, a.bytes_in_window);
      }
    }
    cur.reset();
  };
  if (port_.ar.fired()) accept(ar_cur_);
  if (port_.aw.fired()) accept(aw_cur_);

  if (port_.w.fired()) {
    WStream& s = wq_.front();
    ++s.sent;
    w_next_ = now + spec_.w_beat_interval;
    if (s.sent == s.len) wq_.pop_front();
  }

  auto respond = [&](const ChannelBeat& b, bool final) {
    auto it = inflight_.find(protocol::original_ref(b.txn_ref));
    if (it == inflight_.end()) return;
    InFlight& f = it->second;
    ++f.beats;
    f.resp = protocol::worst(f.resp, b.resp);
    if (!final) return;
    InFlight done = std::move(f);
    inflight_.erase(it);
    on_complete(std::move(done), now);
  };
  if (port_.r.fired()) respond(port_.r.payload(), port_.r.payload().is_last);
  if (port_.b.fired()) respond(port_.b.payload(), true);

  refill(now);
  choose_next(now);
}

}  // namespace realm::platform
