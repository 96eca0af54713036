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

#include <span>
#include <vector>

#include "realm/protocol/types.hpp"

namespace realm::irealm {

using protocol::ChannelBeat;
using protocol::Resp;
using protocol::TxnDescriptor;

// True when a burst must not be cut at granularity g and is longer than g, so
// it cannot pass the splitter at all.
bool must_reject(const TxnDescriptor& txn, std::uint16_t g);

std::uint16_t fragment_count(std::uint16_t len, std::uint16_t g);

// Fragment `index` of txn cut into g-beat pieces (the last may be shorter).
TxnDescriptor fragment_at(const TxnDescriptor& txn, std::uint16_t g, std::uint16_t index);

// All fragments in order. Throws protocol::ProtocolError when must_reject().
std::vector<TxnDescriptor> split_request(const TxnDescriptor& txn, std::uint16_t g);

// Worst response among the fragments of one write.
Resp coalesce_write_responses(std::span<const Resp> fragment_resps);

// Renumbers fragment R beats into one burst of original_len beats and keeps
// only the final last flag.
std::vector<ChannelBeat> gate_r_last(std::span<const ChannelBeat> fragment_beats, protocol::TxnRef original,
                                     std::uint16_t original_len);

}  // namespace realm::irealm
