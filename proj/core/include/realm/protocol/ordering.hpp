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
#include <string>
#include <vector>

#include "realm/protocol/types.hpp"

namespace realm::protocol {

enum class ViolationKind : std::uint8_t {
  WriteDataOrder,   // W bursts not in AW order
  SameIdOrder,      // same-TID completions out of issue order
  MalformedTrace,   // orphan beats, double last, wrong beat counts
};

std::string_view to_string(ViolationKind k);

struct OrderingViolation {
  ViolationKind kind;
  Cycle cycle;
  TxnRef txn_ref;
  std::string detail;
};

// Independent oracle over one manager port's handshake log. Beats in the same
// cycle are processed address first, then W, then R, then B, so a W accepted
// together with its AW is legal. Transactions still open at the end of the
// trace are not reported.
std::vector<OrderingViolation> check_ordering(std::span<const ChannelBeat> trace);

}  // namespace realm::protocol
