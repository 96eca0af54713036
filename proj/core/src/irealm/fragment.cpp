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

#include "realm/irealm/fragment.hpp"

#include <algorithm>

namespace realm::irealm {

using protocol::BurstKind;

bool must_reject(const TxnDescriptor& txn, std::uint16_t g) {
  if (txn.len_beats <= g) return false;
  return !protocol::is_fragmentable(txn) || txn.burst.kind != BurstKind::Incr;
}

std::uint16_t fragment_count(std::uint16_t len, std::uint16_t g) {
  return static_cast<std::uint16_t>((len + g - 1) / g);
}

TxnDescriptor fragment_at(const TxnDescriptor& txn, std::uint16_t g, std::uint16_t index) {
  TxnDescriptor f = txn;
  const std::uint32_t first = std::uint32_t{index} * g;
  f.id = protocol::fragment_ref(txn.id, index);
  f.len_beats = static_cast<std::uint16_t>(std::min<std::uint32_t>(g, txn.len_beats - first));
  if (txn.burst.kind == BurstKind::Incr) f.addr = txn.addr + protocol::Addr{first} * txn.beat_bytes;
  return f;
}

std::vector<TxnDescriptor> split_request(const TxnDescriptor& txn, std::uint16_t g) {
  if (g == 0) throw protocol::ProtocolError("fragment size must be >= 1");
  if (must_reject(txn, g)) throw protocol::ProtocolError("transaction cannot be fragmented");
  std::vector<TxnDescriptor> out;
  const std::uint16_t n = fragment_count(txn.len_beats, g);
  out.reserve(n);
  for (std::uint16_t i = 0; i < n; ++i) out.push_back(fragment_at(txn, g, i));
  return out;
}

Resp coalesce_write_responses(std::span<const Resp> fragment_resps) {
  Resp r = Resp::Okay;
  for (Resp x : fragment_resps) r = protocol::worst(r, x);
  return r;
}

std::vector<ChannelBeat> gate_r_last(std::span<const ChannelBeat> fragment_beats, protocol::TxnRef original,
                                     std::uint16_t original_len) {
  std::vector<ChannelBeat> out(fragment_beats.begin(), fragment_beats.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].txn_ref = original;
    out[i].beat_index = static_cast<std::uint16_t>(i);
    out[i].is_last = i + 1 == original_len;
  }
  return out;
}

}  // namespace realm::irealm
