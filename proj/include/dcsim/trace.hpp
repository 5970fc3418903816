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

#include <cctype>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dcsim/engine.hpp"
#include "dcsim/error.hpp"
#include "dcsim/main_memory.hpp"

namespace dcsim {

// Text trace format, one request per line:
//
//   LD <hexaddr> <size>
//   ST <hexaddr> <size> <hexdata>
//   AMO <op> <hexaddr> <hexdata>
//   FLUSH
//
// Sizes are decimal (1, 2, 4 or 8). Data is written in address order, two
// hex digits per byte; AMO operands are always 8 bytes. `#` starts a comment.

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

inline std::string upper(std::string_view s) {
  std::string u(s);
  for (char& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return u;
}

inline std::size_t parse_size(std::string_view s, std::size_t line) {
  if (s == "1") return 1;
  if (s == "2") return 2;
  if (s == "4") return 4;
  if (s == "8") return 8;
  throw Error(Errc::BadSize, line, "size must be 1, 2, 4 or 8, got '" + std::string(s) + "'");
}

inline Addr parse_addr(std::string_view s, std::size_t line) {
  const auto a = parse_hex_u64(s);
  if (!a) throw Error(Errc::SyntaxError, line, "bad hex address '" + std::string(s) + "'");
  return *a;
}

inline std::vector<std::uint8_t> parse_data(std::string_view s, std::size_t size, std::size_t line) {
  auto bytes = parse_hex_bytes(s);
  if (!bytes || bytes->size() != size)
    throw Error(Errc::SyntaxError, line,
                "expected " + std::to_string(2 * size) + " hex digits of data, got '" + std::string(s) + "'");
  return std::move(*bytes);
}

}  // namespace detail

inline std::vector<CpuRequest> parse_trace(std::string_view text) {
  std::vector<CpuRequest> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto f = detail::split_ws(line);
    if (f.empty()) continue;

    const std::string op = detail::upper(f[0]);
    CpuRequest req;
    if (op == "LD") {
      if (f.size() != 3) throw Error(Errc::SyntaxError, line_no, "LD takes <addr> <size>");
      req = CpuRequest::load(detail::parse_addr(f[1], line_no), detail::parse_size(f[2], line_no));
    } else if (op == "ST") {
      if (f.size() != 4) throw Error(Errc::SyntaxError, line_no, "ST takes <addr> <size> <data>");
      const Addr a = detail::parse_addr(f[1], line_no);
      const std::size_t n = detail::parse_size(f[2], line_no);
      req = CpuRequest::store(a, detail::parse_data(f[3], n, line_no));
    } else if (op == "AMO") {
      if (f.size() != 4) throw Error(Errc::SyntaxError, line_no, "AMO takes <op> <addr> <data>");
      AmoOp amo_op;
      try {
        amo_op = parse_amo_op(f[1]);
      } catch (const Error&) {
        throw Error(Errc::UnknownOp, line_no, "unknown AMO operation '" + std::string(f[1]) + "'");
      }
      const Addr a = detail::parse_addr(f[2], line_no);
      req = CpuRequest::amo(amo_op, a, load_le64(detail::parse_data(f[3], 8, line_no)));
    } else if (op == "FLUSH") {
      if (f.size() != 1) throw Error(Errc::SyntaxError, line_no, "FLUSH takes no operands");
      req = CpuRequest::flush();
    } else {
      throw Error(Errc::SyntaxError, line_no, "unknown request '" + std::string(f[0]) + "'");
    }
    if (req.size != 0 && req.addr % req.size != 0)
      throw Error(Errc::BadAlignment, line_no, "address is not aligned to " + std::to_string(req.size));
    out.push_back(std::move(req));
  }
  return out;
}

inline std::vector<CpuRequest> load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open trace file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

inline std::string format_request(const CpuRequest& r) {
  char addr[24];
  std::snprintf(addr, sizeof addr, "%014llx", static_cast<unsigned long long>(r.addr));
  auto hex = [](std::span<const std::uint8_t> bytes) {
    std::string s;
    char b[3];
    for (auto x : bytes) {
      std::snprintf(b, sizeof b, "%02x", x);
      s += b;
    }
    return s;
  };
  switch (r.kind) {
    case RequestKind::Load: return "LD " + std::string(addr) + ' ' + std::to_string(r.size);
    case RequestKind::Store: return "ST " + std::string(addr) + ' ' + std::to_string(r.size) + ' ' + hex(r.data);
    case RequestKind::Amo: return "AMO " + std::string(to_string(*r.amo_op)) + ' ' + addr + ' ' + hex(r.data);
    case RequestKind::Flush: return "FLUSH";
  }
  return {};
}

inline std::string format_trace(std::span<const CpuRequest> reqs) {
  std::string out;
  for (const auto& r : reqs) out += format_request(r) + '\n';
  return out;
}

}  // namespace dcsim
