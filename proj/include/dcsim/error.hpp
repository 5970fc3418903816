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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dcsim {

using Addr = std::uint64_t;

enum class Errc {
  NonPowerOfTwo,
  WidthOutOfRange,
  OutOfRange,
  UnknownKey,
  FieldOverflow,
  UnalignedCrossBank,
  InvalidWay,
  DuplicateTag,
  Misaligned,
  BadSize,
  UnknownOp,
  UnknownTx,
  NotInflight,
  Inflight,
  IllegalEvent,
  LayoutMismatch,
  SyntaxError,
  BadAlignment,
  Io,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonPowerOfTwo: return "NonPowerOfTwo";
    case Errc::WidthOutOfRange: return "WidthOutOfRange";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::FieldOverflow: return "FieldOverflow";
    case Errc::UnalignedCrossBank: return "UnalignedCrossBank";
    case Errc::InvalidWay: return "InvalidWay";
    case Errc::DuplicateTag: return "DuplicateTag";
    case Errc::Misaligned: return "Misaligned";
    case Errc::BadSize: return "BadSize";
    case Errc::UnknownOp: return "UnknownOp";
    case Errc::UnknownTx: return "UnknownTx";
    case Errc::NotInflight: return "NotInflight";
    case Errc::Inflight: return "Inflight";
    case Errc::IllegalEvent: return "IllegalEvent";
    case Errc::LayoutMismatch: return "LayoutMismatch";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::BadAlignment: return "BadAlignment";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

/// Every recoverable failure in the simulator is reported as an Error carrying
/// a machine-checkable code. Parsers also attach the 1-based input line.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Error(Errc code, std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " +
                           std::string(to_string(code)) + ": " + what),
        code_(code),
        line_(line) {}

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  Errc code_;
  std::optional<std::size_t> line_;
};

}  // namespace dcsim
