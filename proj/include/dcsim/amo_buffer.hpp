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
#include <optional>

#include "dcsim/error.hpp"
#include "dcsim/main_memory.hpp"

namespace dcsim {

struct AmoRequest {
  AmoOp op = AmoOp::Swap;
  Addr addr = 0;
  std::uint64_t operand = 0;
};

enum class AmoAccept { Ok, Busy };

/// Single-slot holding area for one atomic operation between the commit
/// stage and the cache subsystem. accept -> issue -> ack is a strict cycle.
class AmoBuffer {
 public:
  AmoAccept accept(AmoOp op, Addr addr, std::uint64_t operand) {
    if (valid_) return AmoAccept::Busy;
    if (addr % 8 != 0) throw Error(Errc::Misaligned, "AMO address must be 8-byte aligned");
    valid_ = true;
    inflight_ = false;
    req_ = {op, addr, operand};
    return AmoAccept::Ok;
  }

  /// Hands the request to the cache only once all earlier stores drained.
  std::optional<AmoRequest> issue(bool stores_drained) {
    if (!valid_ || inflight_ || !stores_drained) return std::nullopt;
    inflight_ = true;
    return req_;
  }

  void ack(std::uint64_t old_value) {
    if (!inflight_) throw Error(Errc::NotInflight, "AMO acknowledgement without an issued request");
    result_ = old_value;
    valid_ = false;
    inflight_ = false;
  }

  /// Drops an uncommitted request. An issued request cannot be abandoned.
  void flush() {
    if (inflight_) throw Error(Errc::Inflight, "cannot flush an inflight AMO");
    valid_ = false;
  }

  bool valid() const { return valid_; }
  bool inflight() const { return inflight_; }
  const AmoRequest& request() const { return req_; }
  std::optional<std::uint64_t> result() const { return result_; }

 private:
  bool valid_ = false;
  bool inflight_ = false;
  AmoRequest req_;
  std::optional<std::uint64_t> result_;
};

}  // namespace dcsim
