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
#include <vector>

#include "realm/harness/runner.hpp"

namespace realm::harness {

inline constexpr std::string_view kCsvHeader = "scenario,sweep_value,manager,bytes,cycles,mean_lat,max_lat,frac_isolated";

// One row per manager. `cycles` is the manager's runtime (empty for an
// endless manager or an unfinished run); frac_isolated is empty without a
// baseline.
std::string csv_rows(const MetricsReport& r);
std::string to_csv(const std::vector<MetricsReport>& reports);

std::string format_report(const MetricsReport& r);

// Throws std::runtime_error when the file cannot be written.
void write_file(const std::string& path, std::string_view content);

}  // namespace realm::harness
