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

#include "realm/protocol/types.hpp"

#include <bit>

namespace realm::protocol {

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::AR: return "AR";
    case Channel::AW: return "AW";
    case Channel::W: return "W";
    case Channel::R: return "R";
    case Channel::B: return "B";
  }
  return "?";
}

std::string_view to_string(Resp r) {
  switch (r) {
    case Resp::Okay: return "OKAY";
    case Resp::SlvErr: return "SLVERR";
    case Resp::DecErr: return "DECERR";
  }
  return "?";
}

std::string_view to_string(Direction d) { return d == Direction::Read ? "READ" : "WRITE"; }

Tid Tid::checked(std::uint32_t v, unsigned width) {
  if (width < 1 || width > 8) throw ProtocolError("tid width must be 1..8 bits");
  if (v >= (1u << width)) throw ProtocolError("tid value does not fit its width");
  return Tid{v};
}

void validate(const TxnDescriptor& txn) {
  if (txn.len_beats < 1 || txn.len_beats > 256) throw ProtocolError("len_beats outside [1, 256]");
  if (txn.beat_bytes == 0 || !std::has_single_bit(unsigned{txn.beat_bytes}))
    throw ProtocolError("beat_bytes must be a power of two");
  if (txn.burst.kind == BurstKind::Incr && txn.addr % txn.beat_bytes != 0)
    throw ProtocolError("INCR address not beat aligned");
}

ChannelBeat make_ax_beat(const TxnDescriptor& txn) {
  ChannelBeat b;
  b.channel = txn.is_read() ? Channel::AR : Channel::AW;
  b.txn_ref = txn.id;
  b.tid = txn.tid;
  b.manager = txn.manager_id;
  b.cycle = txn.issue_cycle;
  b.request = txn;
  return b;
}

std::vector<ChannelBeat> expand_beats(const TxnDescriptor& txn) {
  std::vector<ChannelBeat> out;
  out.reserve(txn.len_beats + 2u);
  out.push_back(make_ax_beat(txn));
  for (std::uint16_t i = 0; i < txn.len_beats; ++i) {
    ChannelBeat b;
    b.channel = txn.is_read() ? Channel::R : Channel::W;
    b.txn_ref = txn.id;
    if (txn.is_read()) b.tid = txn.tid;
    b.beat_index = i;
    b.is_last = i + 1 == txn.len_beats;
    b.manager = txn.manager_id;
    out.push_back(b);
  }
  if (!txn.is_read()) {
    ChannelBeat b;
    b.channel = Channel::B;
    b.txn_ref = txn.id;
    b.tid = txn.tid;
    b.manager = txn.manager_id;
    out.push_back(b);
  }
  return out;
}

bool is_fragmentable(const TxnDescriptor& txn) {
  if (txn.burst.atomic) return false;
  if (!txn.burst.modifiable && txn.len_beats <= 16) return false;
  return true;
}

}  // namespace realm::protocol
