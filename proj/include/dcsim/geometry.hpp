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

#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "dcsim/error.hpp"

namespace dcsim {

/// How a store is compared against the pending read miss held in the MSHR.
enum class CollisionGranularity { Line, Address };

/// Geometry and policy parameters of the L1 data cache. Defaults describe the
/// stock CVA6 write-through configuration: 256 sets, 8 ways, 16-byte lines.
struct CacheConfig {
  std::uint64_t num_sets = 256;
  std::uint32_t num_ways = 8;
  std::uint64_t line_bytes = 16;
  unsigned addr_bits = 64;
  unsigned lfsr_width = 8;
  std::size_t write_buffer_capacity = 8;
  std::size_t max_tx = 2;
  std::uint64_t hit_latency = 1;
  std::uint64_t miss_latency = 20;
  CollisionGranularity mshr_collision = CollisionGranularity::Line;

  unsigned offset_bits() const { return static_cast<unsigned>(std::countr_zero(line_bytes)); }
  unsigned index_bits() const { return static_cast<unsigned>(std::countr_zero(num_sets)); }
  unsigned tag_bits() const { return addr_bits - index_bits() - offset_bits(); }
  std::uint64_t total_bytes() const { return num_sets * num_ways * line_bytes; }
  // Each line is split across two banks; a bank word holds half a line.
  std::uint64_t bank_bytes() const { return line_bytes / 2; }
  Addr line_base(Addr a) const { return a & ~(line_bytes - 1); }

  bool operator==(const CacheConfig&) const = default;
};

inline constexpr unsigned kMinLfsrWidth = 4;
inline constexpr unsigned kMaxLfsrWidth = 64;
inline constexpr std::uint32_t kMaxWays = 64;

/// Throws Error naming the first violated invariant, checked in field order.
inline void validate_config(const CacheConfig& cfg) {
  if (cfg.num_sets == 0 || !std::has_single_bit(cfg.num_sets))
    throw Error(Errc::NonPowerOfTwo, "num_sets=" + std::to_string(cfg.num_sets));
  if (cfg.num_ways == 0 || cfg.num_ways > kMaxWays)
    throw Error(Errc::OutOfRange, "num_ways must be in [1,64]");
  if (cfg.line_bytes == 0 || !std::has_single_bit(cfg.line_bytes))
    throw Error(Errc::NonPowerOfTwo, "line_bytes=" + std::to_string(cfg.line_bytes));
  if (cfg.line_bytes < 16)
    throw Error(Errc::OutOfRange, "line_bytes must be at least 16 (two 64-bit banks)");
  if (cfg.addr_bits != 64)
    throw Error(Errc::OutOfRange, "addr_bits is fixed at 64");
  if (cfg.index_bits() + cfg.offset_bits() >= cfg.addr_bits)
    throw Error(Errc::OutOfRange, "index and offset leave no tag bits");
  if (cfg.lfsr_width < kMinLfsrWidth || cfg.lfsr_width > kMaxLfsrWidth)
    throw Error(Errc::WidthOutOfRange, "lfsr_width=" + std::to_string(cfg.lfsr_width));
  if (cfg.write_buffer_capacity == 0)
    throw Error(Errc::OutOfRange, "write_buffer_capacity must be positive");
  if (cfg.max_tx == 0)
    throw Error(Errc::OutOfRange, "max_tx must be positive");
}

struct DecomposedAddress {
  std::uint64_t tag = 0;
  std::uint64_t index = 0;
  std::uint64_t offset = 0;

  bool operator==(const DecomposedAddress&) const = default;
};

namespace detail {
constexpr std::uint64_t low_mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}
}  // namespace detail

/// Splits a physical address into offset (low bits), index, and tag.
inline DecomposedAddress decompose(Addr addr, const CacheConfig& cfg) {
  const unsigned ob = cfg.offset_bits();
  const unsigned ib = cfg.index_bits();
  return {addr >> (ob + ib), (addr >> ob) & detail::low_mask(ib), addr & detail::low_mask(ob)};
}

inline Addr recompose(const DecomposedAddress& d, const CacheConfig& cfg) {
  const unsigned ob = cfg.offset_bits();
  const unsigned ib = cfg.index_bits();
  if (d.offset > detail::low_mask(ob))
    throw Error(Errc::FieldOverflow, "offset exceeds " + std::to_string(ob) + " bits");
  if (d.index > detail::low_mask(ib))
    throw Error(Errc::FieldOverflow, "index exceeds " + std::to_string(ib) + " bits");
  if (d.tag > detail::low_mask(cfg.tag_bits()))
    throw Error(Errc::FieldOverflow, "tag exceeds " + std::to_string(cfg.tag_bits()) + " bits");
  return (d.tag << (ob + ib)) | (d.index << ob) | d.offset;
}

/// The most significant offset bit picks the bank: the low half of a line lives
/// in bank 0, the high half in bank 1.
inline unsigned bank_select(std::uint64_t offset, std::uint64_t line_bytes = 16) {
  return (offset & (line_bytes / 2)) != 0 ? 1u : 0u;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::uint64_t parse_config_uint(std::string_view v, std::size_t line) {
  int base = 10;
  if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X')) {
    v.remove_prefix(2);
    base = 16;
  }
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out, base);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw Error(Errc::SyntaxError, line, "expected an unsigned integer, got '" + std::string(v) + "'");
  return out;
}

}  // namespace detail

/// Parses a flat `key = value` config. Blank lines and `#` comments are
/// ignored; unknown keys are rejected. The result is validated.
inline CacheConfig parse_config(std::string_view text) {
  CacheConfig cfg;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::SyntaxError, line_no, "expected key=value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    auto num = [&] { return detail::parse_config_uint(value, line_no); };
    if (key == "num_sets") cfg.num_sets = num();
    else if (key == "num_ways") cfg.num_ways = static_cast<std::uint32_t>(num());
    else if (key == "line_bytes") cfg.line_bytes = num();
    else if (key == "addr_bits") cfg.addr_bits = static_cast<unsigned>(num());
    else if (key == "lfsr_width") cfg.lfsr_width = static_cast<unsigned>(num());
    else if (key == "write_buffer_capacity") cfg.write_buffer_capacity = num();
    else if (key == "max_tx") cfg.max_tx = num();
    else if (key == "hit_latency") cfg.hit_latency = num();
    else if (key == "miss_latency") cfg.miss_latency = num();
    else if (key == "mshr_collision") {
      if (value == "line") cfg.mshr_collision = CollisionGranularity::Line;
      else if (value == "address") cfg.mshr_collision = CollisionGranularity::Address;
      else throw Error(Errc::SyntaxError, line_no, "mshr_collision must be 'line' or 'address'");
    } else {
      throw Error(Errc::UnknownKey, line_no, "unknown key '" + key + "'");
    }
  }
  validate_config(cfg);
  return cfg;
}

inline CacheConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace dcsim
