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

#include <string>
#include <string_view>

#include "realm/protocol/types.hpp"

namespace realm::protocol {

inline constexpr std::string_view kTraceHeader =
    "cycle,component,channel,txn_id,tid,beat_index,is_last,resp";

// cycle,component,channel,txn_id,tid,beat_index,is_last,resp
// tid is empty on W; is_last and resp are empty on channels that lack them.
std::string format_trace_line(Cycle cycle, std::string_view component, const ChannelBeat& beat);

}  // namespace realm::protocol
