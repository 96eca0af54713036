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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "realm/protocol/types.hpp"

namespace realm::erealm {
class Unit;
}
namespace realm::irealm {
class Unit;
}

namespace realm::platform {

using protocol::Resp;

enum class Access : std::uint8_t { RW, RO, WO };

std::string_view to_string(Access a);

struct RegisterField {
  std::string name;
  std::uint32_t offset = 0;
  unsigned width = 32;
  std::uint64_t reset = 0;
  Access access = Access::RW;
  std::string doc;
};

struct RegAccess {
  std::uint32_t requester = 0;  // manager identity
  bool write = false;
  std::uint32_t offset = 0;
  std::uint64_t value = 0;
};

struct RegResult {
  Resp resp = Resp::Okay;
  std::uint64_t value = 0;
  bool ok() const { return resp == Resp::Okay; }
};

// Ownership gate over the configuration space. Unclaimed, only a write to
// the guard register gets through and it claims the space for the writer.
// The owner may hand over (write new owner + 1) or release (write 0).
class BusGuard {
 public:
  bool claimed() const { return owner_.has_value(); }
  std::optional<std::uint32_t> owner() const { return owner_; }
  bool allows(std::uint32_t requester) const { return owner_ == requester; }
  // Guard register write; false when the requester may not change ownership.
  bool write(std::uint32_t requester, std::uint64_t value);
  std::uint64_t read() const { return owner_ ? *owner_ + 1 : 0; }
  void reset() { owner_.reset(); }

 private:
  std::optional<std::uint32_t> owner_;
};

// Address-mapped configuration fields. Writable fields keep a shadow value
// that reads back; a field's writer may refuse a value, which answers the
// access with SLVERR and leaves the shadow unchanged.
class RegisterFile {
 public:
  using Reader = std::function<std::uint64_t()>;
  using Writer = std::function<bool(std::uint64_t)>;

  static constexpr std::uint32_t kGuardOffset = 0;

  explicit RegisterFile(bool guarded = true);

  void add(RegisterField f, Writer w = {}, Reader r = {});

  RegResult access(const RegAccess& a);
  RegResult read(std::uint32_t requester, std::string_view name);
  RegResult write(std::uint32_t requester, std::string_view name, std::uint64_t value);

  // Current shadow of a writable field (no guard check; used by binders).
  std::uint64_t shadow(std::string_view name) const;
  std::optional<std::uint32_t> offset_of(std::string_view name) const;
  const std::vector<RegisterField>& fields() const { return fields_; }
  BusGuard& guard() { return guard_; }
  const BusGuard& guard() const { return guard_; }
  bool guarded() const { return guarded_; }

  // Reset defaults back into every writable field.
  void reset();
  // name | offset | width | reset | access table in Markdown.
  std::string markdown() const;

 private:
  struct Slot {
    Writer writer;
    Reader reader;
    std::uint64_t value;
  };
  std::optional<std::size_t> find(std::uint32_t offset) const;

  bool guarded_;
  BusGuard guard_;
  std::vector<RegisterField> fields_;
  std::vector<Slot> slots_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

// Field sets for the regulation units. Configuration fields are staged and
// take effect on a write to `<prefix>.apply`; control bits act directly.
// Returns the offset after the last field.
std::uint32_t bind_irealm(RegisterFile& rf, const std::string& prefix, irealm::Unit& unit, std::uint32_t base,
                          unsigned max_regions);
std::uint32_t bind_erealm(RegisterFile& rf, const std::string& prefix, erealm::Unit& unit, std::uint32_t base);

}  // namespace realm::platform
