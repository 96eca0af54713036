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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace realm::protocol {

using Cycle = std::uint64_t;
using Addr = std::uint64_t;
using TxnRef = std::uint64_t;

enum class Channel : std::uint8_t { AR, AW, W, R, B };
enum class Direction : std::uint8_t { Read, Write };
enum class BurstKind : std::uint8_t { Incr, Fixed, Wrap };

// Declared in severity order so the worst of two responses is the larger one.
enum class Resp : std::uint8_t { Okay, SlvErr, DecErr };

constexpr Resp worst(Resp a, Resp b) { return a > b ? a : b; }

std::string_view to_string(Channel c);
std::string_view to_string(Resp r);
std::string_view to_string(Direction d);

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Transaction identifier. The width is a property of the issuing port; Tid
// itself only carries the value.
class Tid {
 public:
  constexpr Tid() = default;
  constexpr explicit Tid(std::uint32_t v) : value_(v) {}

  // Throws ProtocolError when v does not fit in `width` bits or width is not 1..8.
  static Tid checked(std::uint32_t v, unsigned width);

  constexpr std::uint32_t value() const { return value_; }
  constexpr auto operator<=>(const Tid&) const = default;

 private:
  std::uint32_t value_ = 0;
};

struct BurstAttr {
  BurstKind kind = BurstKind::Incr;
  bool modifiable = true;
  bool atomic = false;
  bool operator==(const BurstAttr&) const = default;
};

struct TxnDescriptor {
  TxnRef id = 0;
  Direction direction = Direction::Read;
  Tid tid{};
  Addr addr = 0;
  std::uint16_t len_beats = 1;
  std::uint16_t beat_bytes = 8;
  BurstAttr burst{};
  std::uint32_t manager_id = 0;
  Cycle issue_cycle = 0;

  std::uint64_t bytes() const { return std::uint64_t{len_beats} * beat_bytes; }
  bool is_read() const { return direction == Direction::Read; }
  bool operator==(const TxnDescriptor&) const = default;
};

// Throws ProtocolError when a descriptor breaks a structural invariant.
void validate(const TxnDescriptor& txn);

struct ChannelBeat {
  Channel channel = Channel::AR;
  TxnRef txn_ref = 0;
  std::optional<Tid> tid;  // never present on W
  std::uint16_t beat_index = 0;
  bool is_last = false;
  Resp resp = Resp::Okay;
  Cycle cycle = 0;
  // Routing tag used by the crossbar for R/B return; not an AXI signal.
  std::uint32_t manager = 0;
  // Request payload on AR/AW.
  std::optional<TxnDescriptor> request;

  bool operator==(const ChannelBeat&) const = default;
};

ChannelBeat make_ax_beat(const TxnDescriptor& txn);

// One address beat, the data or response beats, and a B for writes.
std::vector<ChannelBeat> expand_beats(const TxnDescriptor& txn);

// Atomic bursts and short non-modifiable bursts may not be split.
bool is_fragmentable(const TxnDescriptor& txn);

// Reference layout: [manager:16][sequence:32][fragment:16]. Managers issue
// fragment 0; the burst splitter derives fragment references from it.
constexpr TxnRef make_txn_ref(std::uint32_t manager, std::uint32_t seq) {
  return (TxnRef{manager & 0xffffu} << 48) | (TxnRef{seq} << 16);
}
constexpr TxnRef fragment_ref(TxnRef original, std::uint32_t index) {
  return (original & ~TxnRef{0xffff}) | ((index + 1) & 0xffffu);
}
constexpr TxnRef original_ref(TxnRef ref) { return ref & ~TxnRef{0xffff}; }

}  // namespace realm::protocol
