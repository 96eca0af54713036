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

#include "realm/protocol/trace_format.hpp"

#include <fmt/format.h>

namespace realm::protocol {

std::string format_trace_line(Cycle cycle, std::string_view component, const ChannelBeat& beat) {
  const bool data = beat.channel == Channel::W || beat.channel == Channel::R;
  const bool resp = beat.channel == Channel::R || beat.channel == Channel::B;
  std::string tid = beat.tid ? fmt::format("{}", beat.tid->value()) : std::string{};
  return fmt::format("{},{},{},{:#x},{},{},{},{}", cycle, component, to_string(beat.channel), beat.txn_ref, tid,
                     beat.beat_index, data ? (beat.is_last ? "1" : "0") : "", resp ? to_string(beat.resp) : "");
}

}  // namespace realm::protocol
