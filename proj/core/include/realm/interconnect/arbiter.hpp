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

#include <cstddef>
#include <optional>
#include <vector>

namespace realm::interconnect {

// Round-robin pointer: the next grant goes to the first requester at or after
// the pointer; after a grant the pointer moves just past the grantee.
class RrArbiter {
 public:
  explicit RrArbiter(std::size_t n = 1) : n_(n) {}

  std::size_t size() const { return n_; }
  std::size_t pointer() const { return ptr_; }

  // Winner without touching the pointer.
  std::optional<std::size_t> pick(const std::vector<bool>& requests) const {
    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t i = (ptr_ + k) % n_;
      if (i < requests.size() && requests[i]) return i;
    }
    return std::nullopt;
  }

  void advance_past(std::size_t granted) { ptr_ = (granted + 1) % n_; }

  std::optional<std::size_t> arbitrate(const std::vector<bool>& requests) {
    auto g = pick(requests);
    if (g) advance_past(*g);
    return g;
  }

 private:
  std::size_t n_;
  std::size_t ptr_ = 0;
};

}  // namespace realm::interconnect
