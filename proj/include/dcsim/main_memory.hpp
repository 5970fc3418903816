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

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dcsim/error.hpp"
#include "dcsim/geometry.hpp"

namespace dcsim {

/// RISC-V A-extension read-modify-write operations on 64-bit words.
enum class AmoOp { Swap, Add, And, Or, Xor, Max, Min, Maxu, Minu };

inline constexpr std::array<std::string_view, 9> kAmoOpNames = {
    "SWAP", "ADD", "AND", "OR", "XOR", "MAX", "MIN", "MAXU", "MINU"};

inline std::string_view to_string(AmoOp op) { return kAmoOpNames[static_cast<std::size_t>(op)]; }

/// Case-insensitive; throws UnknownOp.
inline AmoOp parse_amo_op(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (std::size_t i = 0; i < kAmoOpNames.size(); ++i)
    if (kAmoOpNames[i] == upper) return static_cast<AmoOp>(i);
  throw Error(Errc::UnknownOp, "unknown AMO operation '" + std::string(name) + "'");
}

inline std::uint64_t apply_amo(AmoOp op, std::uint64_t old, std::uint64_t operand) {
  const auto s_old = static_cast<std::int64_t>(old);
  const auto s_opd = static_cast<std::int64_t>(operand);
  switch (op) {
    case AmoOp::Swap: return operand;
    case AmoOp::Add: return old + operand;
    case AmoOp::And: return old & operand;
    case AmoOp::Or: return old | operand;
    case AmoOp::Xor: return old ^ operand;
    case AmoOp::Max: return static_cast<std::uint64_t>(std::max(s_old, s_opd));
    case AmoOp::Min: return static_cast<std::uint64_t>(std::min(s_old, s_opd));
    case AmoOp::Maxu: return std::max(old, operand);
    case AmoOp::Minu: return std::min(old, operand);
  }
  throw Error(Errc::UnknownOp, "invalid AMO opcode");
}

inline std::uint64_t load_le64(std::span<const std::uint8_t> b) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8 && i < b.size(); ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

inline std::array<std::uint8_t, 8> store_le64(std::uint64_t v) {
  std::array<std::uint8_t, 8> out{};
  for (std::size_t i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return out;
}

inline bool valid_mem_size(std::size_t size) {
  return size == 1 || size == 2 || size == 4 || size == 8 || size == 16;
}

/// Sparse byte-addressable backing store standing in for the AXI-attached
/// main memory. Untouched bytes read as zero.
class MainMemory {
 public:
  static constexpr std::size_t kPageBytes = 4096;

  std::vector<std::uint8_t> read(Addr addr, std::size_t size) const {
    check_access(addr, size);
    return read_span(addr, size);
  }

  void write(Addr addr, std::span<const std::uint8_t> data) {
    check_access(addr, data.size());
    write_span(addr, data);
  }

  /// Returns the previous word; the update happens in one call, so nothing
  /// can interleave with it.
  std::uint64_t amo(AmoOp op, Addr addr, std::uint64_t operand) {
    if (addr % 8 != 0) throw Error(Errc::Misaligned, "AMO address must be 8-byte aligned");
    const std::uint64_t old = load_le64(read_span(addr, 8));
    const auto next = store_le64(apply_amo(op, old, operand));
    write_span(addr, next);
    return old;
  }

  // Unchecked accessors used for line fills, masked write-buffer traffic, and
  // preload files. They may span pages.
  std::vector<std::uint8_t> read_span(Addr addr, std::size_t size) const {
    std::vector<std::uint8_t> out(size, 0);
    for (std::size_t i = 0; i < size; ++i) out[i] = read_byte(addr + i);
    return out;
  }

  void write_span(Addr addr, std::span<const std::uint8_t> data) {
    for (std::size_t i = 0; i < data.size(); ++i) write_byte(addr + i, data[i]);
  }

  std::uint8_t read_byte(Addr addr) const {
    auto it = pages_.find(addr / kPageBytes);
    return it == pages_.end() ? 0 : it->second[addr % kPageBytes];
  }

  void write_byte(Addr addr, std::uint8_t value) { pages_[addr / kPageBytes][addr % kPageBytes] = value; }

  std::size_t touched_pages() const { return pages_.size(); }

 private:
  static void check_access(Addr addr, std::size_t size) {
    if (!valid_mem_size(size)) throw Error(Errc::BadSize, "size " + std::to_string(size));
    if (addr % size != 0) throw Error(Errc::Misaligned, "address not aligned to " + std::to_string(size));
  }

  std::unordered_map<Addr, std::array<std::uint8_t, kPageBytes>> pages_;
};

namespace detail {

inline int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline std::optional<std::uint64_t> parse_hex_u64(std::string_view s) {
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
  if (s.empty() || s.size() > 16) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    const int d = hex_digit(c);
    if (d < 0) return std::nullopt;
    v = (v << 4) | static_cast<std::uint64_t>(d);
  }
  return v;
}

/// Hex string in address order, two digits per byte.
inline std::optional<std::vector<std::uint8_t>> parse_hex_bytes(std::string_view s) {
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
  if (s.empty() || s.size() % 2 != 0) return std::nullopt;
  std::vector<std::uint8_t> out;
  out.reserve(s.size() / 2);
  for (std::size_t i = 0; i < s.size(); i += 2) {
    const int hi = hex_digit(s[i]);
    const int lo = hex_digit(s[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

}  // namespace detail

/// Loads `addr: hexbytes` lines into memory. `#` starts a comment.
inline void load_preload(MainMemory& mem, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw Error(Errc::SyntaxError, line_no, "expected 'addr: hexbytes'");
    const auto addr = detail::parse_hex_u64(detail::trim(line.substr(0, colon)));
    if (!addr) throw Error(Errc::SyntaxError, line_no, "bad address");
    std::string digits;
    for (char c : line.substr(colon + 1))
      if (!std::isspace(static_cast<unsigned char>(c))) digits += c;
    const auto bytes = detail::parse_hex_bytes(digits);
    if (!bytes) throw Error(Errc::SyntaxError, line_no, "bad hex byte string");
    mem.write_span(*addr, *bytes);
  }
}

inline void load_preload_file(MainMemory& mem, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open preload file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  load_preload(mem, ss.str());
}

}  // namespace dcsim
