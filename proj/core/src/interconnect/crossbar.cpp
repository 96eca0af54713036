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

#include "realm/interconnect/crossbar.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace realm::interconnect {

using protocol::Resp;

namespace {
constexpr std::size_t kErrQueue = 4;
}

AddrMap::AddrMap(std::vector<AddrRange> ranges, std::size_t num_subordinates) : ranges_(std::move(ranges)) {
  for (const auto& r : ranges_) {
    if (r.base >= r.limit) throw sim::ConfigError(fmt::format("empty address range [{:#x}, {:#x})", r.base, r.limit));
    if (r.subordinate >= num_subordinates)
      throw sim::ConfigError(fmt::format("address range maps to unknown subordinate {}", r.subordinate));
  }
  std::sort(ranges_.begin(), ranges_.end(), [](const auto& a, const auto& b) { return a.base < b.base; });
  for (std::size_t i = 1; i < ranges_.size(); ++i)
    if (ranges_[i].base < ranges_[i - 1].limit)
      throw sim::ConfigError(fmt::format("address ranges overlap at {:#x}", ranges_[i].base));
}

std::optional<std::size_t> AddrMap::route(Addr addr) const {
  for (const auto& r : ranges_)
    if (addr >= r.base && addr < r.limit) return r.subordinate;
  return std::nullopt;
}

Crossbar::Crossbar(std::string name, XbarConfig cfg)
    : sim::Component(std::move(name)),
      cfg_(std::move(cfg)),
      map_(cfg_.addr_map, cfg_.num_subordinates),
      err_(cfg_.num_subordinates) {
  if (cfg_.num_managers == 0) throw sim::ConfigError("crossbar needs at least one manager port");
  if (cfg_.max_outstanding_per_port == 0) throw sim::ConfigError("max_outstanding_per_port must be >= 1");
  if (cfg_.w_reservation_depth == 0) throw sim::ConfigError("w_reservation_depth must be >= 1");
  for (std::size_t m = 0; m < cfg_.num_managers; ++m) {
    mgr_ports_.push_back(std::make_unique<sim::SubordinatePorts>());
    MgrState st;
    st.r_arb = RrArbiter(cfg_.num_subordinates + 1);
    st.b_arb = RrArbiter(cfg_.num_subordinates + 1);
    mgrs_.push_back(std::move(st));
  }
  for (std::size_t s = 0; s < cfg_.num_subordinates; ++s) {
    sub_ports_.push_back(std::make_unique<sim::ManagerPorts>());
    SubState st;
    st.ar_arb = RrArbiter(cfg_.num_managers);
    st.aw_arb = RrArbiter(cfg_.num_managers);
    st.ar_grants.assign(cfg_.num_managers, 0);
    st.aw_grants.assign(cfg_.num_managers, 0);
    subs_.push_back(std::move(st));
  }
  req_.assign(std::max(cfg_.num_managers, cfg_.num_subordinates + 1), false);
}

std::size_t Crossbar::decode(const sim::InPort& ax) const {
  if (!ax.valid() || !ax.payload().request) return kNone;
  auto s = map_.route(ax.payload().request->addr);
  return s ? *s : err_;
}

bool Crossbar::id_ok(const std::unordered_map<std::uint32_t, IdRoute>& ids, protocol::Tid tid,
                     std::size_t target) const {
  // Same-TID transactions may only be outstanding at one target at a time,
  // otherwise their completions could overtake each other.
  auto it = ids.find(tid.value());
  return it == ids.end() || it->second.count == 0 || it->second.target == target;
}

void Crossbar::eval_address(bool read) {
  const std::size_t M = cfg_.num_managers;
  std::vector<bool> eligible(M, false);
  std::vector<bool> ready(M, false);
  for (std::size_t m = 0; m < M; ++m) {
    MgrState& st = mgrs_[m];
    const sim::InPort& ax = read ? mgr_ports_[m]->ar : mgr_ports_[m]->aw;
    std::size_t t = decode(ax);
    std::size_t& target = read ? st.ar_target : st.aw_target;
    target = kNone;
    if (t == kNone) continue;
    unsigned out = read ? st.rd_out : st.wr_out;
    if (out >= cfg_.max_outstanding_per_port) continue;
    if (!id_ok(read ? st.rd_ids : st.wr_ids, *ax.payload().tid, t)) continue;
    if (!read && st.w_route.size() >= cfg_.max_outstanding_per_port) continue;
    if (t == err_) {
      auto& q = read ? st.err_reads : st.err_writes;
      if (q.size() >= kErrQueue) continue;
      target = t;
      ready[m] = true;
      continue;
    }
    if (!read && subs_[t].w_order.size() >= cfg_.w_reservation_depth) continue;
    target = t;
    eligible[m] = true;
  }

  for (std::size_t s = 0; s < cfg_.num_subordinates; ++s) {
    SubState& ss = subs_[s];
    for (std::size_t m = 0; m < M; ++m)
      req_[m] = eligible[m] && (read ? mgrs_[m].ar_target : mgrs_[m].aw_target) == s;
    std::size_t lock = read ? ss.ar_lock : ss.aw_lock;
    std::size_t g = kNone;
    if (lock != kNone && req_[lock]) {
      g = lock;
    } else {
      std::vector<bool> r(req_.begin(), req_.begin() + static_cast<std::ptrdiff_t>(M));
      auto p = (read ? ss.ar_arb : ss.aw_arb).pick(r);
      if (p) g = *p;
    }
    (read ? ss.ar_grant : ss.aw_grant) = g;
    sim::OutPort& out = read ? sub_ports_[s]->ar : sub_ports_[s]->aw;
    if (g == kNone) {
      out.idle();
      continue;
    }
    ChannelBeat beat = (read ? mgr_ports_[g]->ar : mgr_ports_[g]->aw).payload();
    beat.manager = static_cast<std::uint32_t>(g);
    if (beat.request) beat.request->manager_id = static_cast<std::uint32_t>(g);
    out.drive(beat);
    ready[g] = out.ready();
  }

  for (std::size_t m = 0; m < M; ++m) {
    if (read) {
      mgr_ports_[m]->ar.set_ready(ready[m]);
    } else {
      mgr_ports_[m]->aw.set_ready(ready[m]);
    }
  }
}

void Crossbar::eval_write_data() {
  const std::size_t M = cfg_.num_managers;
  for (std::size_t m = 0; m < M; ++m) {
    MgrState& st = mgrs_[m];
    const auto& p = *mgr_ports_[m];
    if (!st.w_route.empty()) {
      st.w_target = st.w_route.front();
    } else if (st.aw_target != kNone && p.aw.fired()) {
      st.w_target = st.aw_target;
    } else {
      st.w_target = kNone;
    }
  }
  for (std::size_t s = 0; s < cfg_.num_subordinates; ++s) {
    SubState& ss = subs_[s];
    std::size_t owner = kNone;
    if (!ss.w_order.empty()) {
      owner = ss.w_order.front();
    } else if (ss.aw_grant != kNone && sub_ports_[s]->aw.fired()) {
      owner = ss.aw_grant;
    }
    if (owner != kNone && mgrs_[owner].w_target == s && mgr_ports_[owner]->w.valid()) {
      ss.w_owner = owner;
      sub_ports_[s]->w.drive(mgr_ports_[owner]->w.payload());
    } else {
      ss.w_owner = kNone;
      sub_ports_[s]->w.idle();
    }
  }
  for (std::size_t m = 0; m < M; ++m) {
    std::size_t t = mgrs_[m].w_target;
    bool ready = false;
    if (t == err_) {
      ready = true;
    } else if (t != kNone && subs_[t].w_owner == m) {
      ready = sub_ports_[t]->w.ready();
    }
    mgr_ports_[m]->w.set_ready(ready);
  }
}

ChannelBeat Crossbar::error_beat(std::size_t m, bool read) const {
  const MgrState& st = mgrs_[m];
  ChannelBeat b;
  b.manager = static_cast<std::uint32_t>(m);
  b.resp = Resp::DecErr;
  if (read) {
    const ErrTxn& e = st.err_reads.front();
    b.channel = Channel::R;
    b.txn_ref = e.ref;
    b.tid = e.tid;
    b.beat_index = e.sent;
    b.is_last = e.sent + 1 == e.len;
  } else {
    const ErrTxn& e = st.err_writes.front();
    b.channel = Channel::B;
    b.txn_ref = e.ref;
    b.tid = e.tid;
  }
  return b;
}

void Crossbar::eval_responses(bool read) {
  const std::size_t S = cfg_.num_subordinates;
  std::vector<bool> cand(S + 1, false);
  for (std::size_t m = 0; m < cfg_.num_managers; ++m) {
    MgrState& st = mgrs_[m];
    std::fill(cand.begin(), cand.end(), false);
    for (std::size_t s = 0; s < S; ++s) {
      const sim::InPort& in = read ? sub_ports_[s]->r : sub_ports_[s]->b;
      cand[s] = in.valid() && in.payload().manager == m;
    }
    if (read) {
      cand[err_] = !st.err_reads.empty();
    } else {
      cand[err_] = !st.err_writes.empty() && st.err_writes.front().data_done;
    }
    std::size_t src = kNone;
    if (read && st.r_lock != kNone) {
      if (cand[st.r_lock]) src = st.r_lock;
    } else {
      auto p = (read ? st.r_arb : st.b_arb).pick(cand);
      if (p) src = *p;
    }
    (read ? st.r_src : st.b_src) = src;
    sim::OutPort& out = read ? mgr_ports_[m]->r : mgr_ports_[m]->b;
    if (src == kNone) {
      out.idle();
    } else if (src == err_) {
      out.drive(error_beat(m, read));
    } else {
      out.drive((read ? sub_ports_[src]->r : sub_ports_[src]->b).payload());
    }
  }
  for (std::size_t s = 0; s < S; ++s) {
    sim::InPort& in = read ? sub_ports_[s]->r : sub_ports_[s]->b;
    bool ready = false;
    if (in.valid()) {
      std::size_t m = in.payload().manager;
      if (m < cfg_.num_managers && (read ? mgrs_[m].r_src : mgrs_[m].b_src) == s)
        ready = (read ? mgr_ports_[m]->r : mgr_ports_[m]->b).ready();
    }
    in.set_ready(ready);
  }
}

void Crossbar::evaluate(sim::Cycle) {
  eval_address(true);
  eval_address(false);
  eval_write_data();
  eval_responses(true);
  eval_responses(false);
}

void Crossbar::note_issue(std::unordered_map<std::uint32_t, IdRoute>& ids, protocol::Tid tid, std::size_t target) {
  IdRoute& r = ids[tid.value()];
  r.target = target;
  ++r.count;
}

void Crossbar::note_done(std::unordered_map<std::uint32_t, IdRoute>& ids, protocol::Tid tid) {
  auto it = ids.find(tid.value());
  if (it == ids.end() || it->second.count == 0) return;
  if (--it->second.count == 0) ids.erase(it);
}

void Crossbar::commit(sim::Cycle) {
  for (std::size_t s = 0; s < cfg_.num_subordinates; ++s) {
    SubState& ss = subs_[s];
    const auto& sp = *sub_ports_[s];
    if (sp.ar.fired()) {
      std::size_t m = ss.ar_grant;
      note_issue(mgrs_[m].rd_ids, *sp.ar.payload().tid, s);
      ++mgrs_[m].rd_out;
      ++ss.ar_grants[m];
      ss.ar_arb.advance_past(m);
      ss.ar_lock = kNone;
    } else {
      ss.ar_lock = sp.ar.valid() ? ss.ar_grant : kNone;
    }
    if (sp.aw.fired()) {
      std::size_t m = ss.aw_grant;
      note_issue(mgrs_[m].wr_ids, *sp.aw.payload().tid, s);
      ++mgrs_[m].wr_out;
      ++ss.aw_grants[m];
      ss.aw_arb.advance_past(m);
      ss.aw_lock = kNone;
      ss.w_order.push_back(m);
      mgrs_[m].w_route.push_back(s);
    } else {
      ss.aw_lock = sp.aw.valid() ? ss.aw_grant : kNone;
    }
  }

  for (std::size_t m = 0; m < cfg_.num_managers; ++m) {
    MgrState& st = mgrs_[m];
    const auto& p = *mgr_ports_[m];
    if (st.ar_target == err_ && p.ar.fired()) {
      const auto& req = *p.ar.payload().request;
      st.err_reads.push_back({req.id, req.tid, req.len_beats});
      note_issue(st.rd_ids, req.tid, err_);
      ++st.rd_out;
    }
    if (st.aw_target == err_ && p.aw.fired()) {
      const auto& req = *p.aw.payload().request;
      st.err_writes.push_back({req.id, req.tid, req.len_beats});
      note_issue(st.wr_ids, req.tid, err_);
      ++st.wr_out;
      st.w_route.push_back(err_);
    }

    if (p.w.fired() && p.w.payload().is_last && !st.w_route.empty()) {
      std::size_t t = st.w_route.front();
      st.w_route.pop_front();
      if (t == err_) {
        for (auto& e : st.err_writes) {
          if (!e.data_done) {
            e.data_done = true;
            break;
          }
        }
      } else if (!subs_[t].w_order.empty()) {
        subs_[t].w_order.pop_front();
      }
    }

    if (p.r.fired()) {
      const ChannelBeat& beat = p.r.payload();
      std::size_t src = st.r_src;
      if (src == err_) ++st.err_reads.front().sent;
      if (beat.is_last) {
        if (src == err_) st.err_reads.pop_front();
        if (st.rd_out > 0) --st.rd_out;
        note_done(st.rd_ids, *beat.tid);
        st.r_arb.advance_past(src);
        st.r_lock = kNone;
      } else {
        st.r_lock = src;
      }
    }
    if (p.b.fired()) {
      const ChannelBeat& beat = p.b.payload();
      if (st.b_src == err_) st.err_writes.pop_front();
      if (st.wr_out > 0) --st.wr_out;
      note_done(st.wr_ids, *beat.tid);
      st.b_arb.advance_past(st.b_src);
    }
  }
}

}  // namespace realm::interconnect
