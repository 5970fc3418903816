/*
 * Copyright 2026 The dcsim Authors
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

#include "dcsim/amo_buffer.hpp"
#include "dcsim/geometry.hpp"

namespace dcsim {

enum class MshrAlloc { Ok, Busy };

/// Miss Status Holding Register. CVA6 keeps a single entry: the address,
/// size, and id of the one pending read miss.
class Mshr {
 public:
  explicit Mshr(std::uint64_t line_bytes = 16,
                CollisionGranularity granularity = CollisionGranularity::Line)
      : line_bytes_(line_bytes), granularity_(granularity) {}

  MshrAlloc allocate(Addr addr, std::size_t size, std::uint64_t id) {
    if (valid_) return MshrAlloc::Busy;
    valid_ = true;
    addr_ = addr;
    size_ = size;
    id_ = id;
    return MshrAlloc::Ok;
  }

  void clear() { valid_ = false; }

  /// First stall condition: a store that touches the line of the pending
  /// read miss. With address granularity only overlapping bytes collide.
  bool write_collides(Addr store_addr, std::size_t store_size) const {
    if (!valid_) return false;
    if (granularity_ == CollisionGranularity::Line)
      return line_of(store_addr) == line_of(addr_);
    return store_addr < addr_ + size_ && addr_ < store_addr + store_size;
  }

  bool valid() const { return valid_; }
  Addr addr() const { return addr_; }
  std::size_t size() const { return size_; }
  std::uint64_t id() const { return id_; }

 private:
  Addr line_of(Addr a) const { return a & ~(line_bytes_ - 1); }

  std::uint64_t line_bytes_;
  CollisionGranularity granularity_;
  bool valid_ = false;
  Addr addr_ = 0;
  std::size_t size_ = 0;
  std::uint64_t id_ = 0;
};

/// Second stall condition: the line of a read miss contains the 64-bit word
/// targeted by an inflight AMO.
inline bool read_overlaps_amo(Addr read_addr, std::size_t /*read_size*/, const AmoBuffer& amo,
                              std::uint64_t line_bytes = 16) {
  if (!amo.inflight()) return false;
  const Addr line = read_addr & ~(line_bytes - 1);
  const Addr word = amo.request().addr & ~Addr{7};
  return word < line + line_bytes && line < word + 8;
}

}  // namespace dcsim
