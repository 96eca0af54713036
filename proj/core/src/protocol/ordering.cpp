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

#include "realm/protocol/ordering.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

namespace realm::protocol {

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::WriteDataOrder: return "write-data-order";
    case ViolationKind::SameIdOrder: return "same-id-order";
    case ViolationKind::MalformedTrace: return "malformed-trace";
  }
  return "?";
}

namespace {

int channel_rank(Channel c) {
  switch (c) {
    case Channel::AR:
    case Channel::AW: return 0;
    case Channel::W: return 1;
    case Channel::R: return 2;
    case Channel::B: return 3;
  }
  return 4;
}

struct OpenTxn {
  Direction dir;
  Tid tid;
  std::uint16_t len;
  std::uint16_t beats = 0;
  bool data_done = false;
};

class Checker {
 public:
  std::vector<OrderingViolation> run(std::span<const ChannelBeat> trace) {
    std::vector<std::size_t> order(trace.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (trace[a].cycle != trace[b].cycle) return trace[a].cycle < trace[b].cycle;
      return channel_rank(trace[a].channel) < channel_rank(trace[b].channel);
    });
    for (std::size_t i : order) visit(trace[i]);
    return std::move(out_);
  }

 private:
  void flag(ViolationKind k, const ChannelBeat& b, std::string detail) {
    out_.push_back({k, b.cycle, b.txn_ref, std::move(detail)});
  }

  std::deque<TxnRef>& chain(Direction d, Tid t) { return chains_[{d, t.value()}]; }

  void visit(const ChannelBeat& b) {
    switch (b.channel) {
      case Channel::AR:
      case Channel::AW: on_address(b); break;
      case Channel::W: on_write_data(b); break;
      case Channel::R: on_read_data(b); break;
      case Channel::B: on_write_resp(b); break;
    }
  }

  void on_address(const ChannelBeat& b) {
    if (!b.request || !b.tid) {
      flag(ViolationKind::MalformedTrace, b, "address beat without request payload");
      return;
    }
    if (open_.contains(b.txn_ref) || closed_.contains(b.txn_ref)) {
      flag(ViolationKind::MalformedTrace, b, "duplicate transaction reference");
      return;
    }
    Direction d = b.channel == Channel::AR ? Direction::Read : Direction::Write;
    open_.emplace(b.txn_ref, OpenTxn{d, *b.tid, b.request->len_beats});
    chain(d, *b.tid).push_back(b.txn_ref);
    if (d == Direction::Write) w_order_.push_back(b.txn_ref);
  }

  void on_write_data(const ChannelBeat& b) {
    auto it = open_.find(b.txn_ref);
    if (it == open_.end() || it->second.dir != Direction::Write || it->second.data_done) {
      flag(ViolationKind::MalformedTrace, b, "orphan W beat");
      return;
    }
    if (b.tid) flag(ViolationKind::MalformedTrace, b, "W beat carries a TID");
    if (w_order_.empty() || w_order_.front() != b.txn_ref)
      flag(ViolationKind::WriteDataOrder, b, "W burst does not follow AW order");
    OpenTxn& t = it->second;
    ++t.beats;
    bool expect_last = t.beats == t.len;
    if (b.is_last != expect_last)
      flag(ViolationKind::MalformedTrace, b, fmt::format("W last flag wrong at beat {}/{}", t.beats, t.len));
    if (b.is_last || expect_last) {
      t.data_done = true;
      w_order_.erase(std::find(w_order_.begin(), w_order_.end(), b.txn_ref));
    }
  }

  void on_read_data(const ChannelBeat& b) {
    auto it = open_.find(b.txn_ref);
    if (it == open_.end() || it->second.dir != Direction::Read) {
      flag(ViolationKind::MalformedTrace, b, "orphan R beat");
      return;
    }
    OpenTxn& t = it->second;
    if (!b.tid || *b.tid != t.tid) flag(ViolationKind::MalformedTrace, b, "R beat TID differs from AR");
    auto& c = chain(Direction::Read, t.tid);
    if (c.empty() || c.front() != b.txn_ref)
      flag(ViolationKind::SameIdOrder, b, "read data returned ahead of an older same-TID read");
    ++t.beats;
    bool expect_last = t.beats == t.len;
    if (b.is_last != expect_last)
      flag(ViolationKind::MalformedTrace, b, fmt::format("R last flag wrong at beat {}/{}", t.beats, t.len));
    if (b.is_last || expect_last) complete(b.txn_ref, t);
  }

  void on_write_resp(const ChannelBeat& b) {
    auto it = open_.find(b.txn_ref);
    if (it == open_.end() || it->second.dir != Direction::Write) {
      flag(ViolationKind::MalformedTrace, b, "orphan B beat");
      return;
    }
    OpenTxn& t = it->second;
    if (!b.tid || *b.tid != t.tid) flag(ViolationKind::MalformedTrace, b, "B TID differs from AW");
    if (!t.data_done) flag(ViolationKind::MalformedTrace, b, "B before the last W beat");
    auto& c = chain(Direction::Write, t.tid);
    if (c.empty() || c.front() != b.txn_ref)
      flag(ViolationKind::SameIdOrder, b, "write response ahead of an older same-TID write");
    if (!t.data_done) {
      t.data_done = true;
      auto w = std::find(w_order_.begin(), w_order_.end(), b.txn_ref);
      if (w != w_order_.end()) w_order_.erase(w);
    }
    complete(b.txn_ref, t);
  }

  void complete(TxnRef ref, const OpenTxn& t) {
    auto& c = chain(t.dir, t.tid);
    c.erase(std::find(c.begin(), c.end(), ref));
    closed_.insert(ref);
    open_.erase(ref);
  }

  std::unordered_map<TxnRef, OpenTxn> open_;
  std::set<TxnRef> closed_;
  std::deque<TxnRef> w_order_;
  std::map<std::pair<Direction, std::uint32_t>, std::deque<TxnRef>> chains_;
  std::vector<OrderingViolation> out_;
};

}  // namespace

std::vector<OrderingViolation> check_ordering(std::span<const ChannelBeat> trace) {
  return Checker{}.run(trace);
}

}  // namespace realm::protocol
