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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcsim/engine.hpp"
#include "dcsim/error.hpp"
#include "dcsim/geometry.hpp"

namespace dcsim {

// Tags used to build the eviction set; far from any address a trace is
// likely to touch on its own.
inline constexpr std::uint64_t kPrimeTagBase = 0x100;

/// Where each bit's probe window sits inside a generated trace.
struct PrimeProbeLayout {
  std::vector<std::size_t> probe_begin;
  std::size_t probes_per_bit = 0;
  std::size_t total = 0;
};

struct PrimeProbeTrace {
  std::vector<CpuRequest> requests;
  PrimeProbeLayout layout;
};

/// Builds a noiseless Prime+Probe exchange over one cache set. Every bit
/// period is
///
///   FLUSH                      reset, so the prime owns every way
///   LD x num_ways              prime: distinct tags, all mapping to the set
///   LD (victim tag)            sender, only when the bit is 1
///   LD x num_ways              probe: reload the prime addresses
///
/// With pseudo-random replacement a sender line left over from a previous
/// bit cannot be displaced deterministically by reloading, hence the reset.
inline PrimeProbeTrace gen_prime_probe_trace(const CacheConfig& cfg, std::uint64_t target_set,
                                             std::span<const std::uint8_t> message) {
  validate_config(cfg);
  if (target_set >= cfg.num_sets)
    throw Error(Errc::OutOfRange, "target set " + std::to_string(target_set));
  auto address = [&](std::uint64_t k) { return recompose({kPrimeTagBase + k, target_set, 0}, cfg); };

  PrimeProbeTrace out;
  out.layout.probes_per_bit = cfg.num_ways;
  for (std::uint8_t bit : message) {
    out.requests.push_back(CpuRequest::flush());
    for (std::uint32_t w = 0; w < cfg.num_ways; ++w) out.requests.push_back(CpuRequest::load(address(w), 8));
    if (bit != 0) out.requests.push_back(CpuRequest::load(address(cfg.num_ways), 8));
    out.layout.probe_begin.push_back(out.requests.size());
    for (std::uint32_t w = 0; w < cfg.num_ways; ++w) out.requests.push_back(CpuRequest::load(address(w), 8));
  }
  out.layout.total = out.requests.size();
  return out;
}

/// A bit decodes as 1 iff its probe window saw at least one load miss.
inline std::vector<std::uint8_t> decode_probe(std::span<const AccessResult> results,
                                              const PrimeProbeLayout& layout) {
  if (results.size() != layout.total)
    throw Error(Errc::LayoutMismatch, "expected " + std::to_string(layout.total) + " results, got " +
                                          std::to_string(results.size()));
  std::vector<std::uint8_t> bits;
  bits.reserve(layout.probe_begin.size());
  for (std::size_t begin : layout.probe_begin) {
    if (begin + layout.probes_per_bit > results.size())
      throw Error(Errc::LayoutMismatch, "probe window runs past the end of the results");
    bool miss = false;
    for (std::size_t i = begin; i < begin + layout.probes_per_bit; ++i) {
      const AccessResult& r = results[i];
      if (r.kind != RequestKind::Load || (r.outcome != Outcome::Hit && r.outcome != Outcome::Miss))
        throw Error(Errc::LayoutMismatch, "result " + std::to_string(i) + " is not a load");
      miss |= r.outcome == Outcome::Miss;
    }
    bits.push_back(miss ? 1 : 0);
  }
  return bits;
}

/// "1011" -> {1,0,1,1}. Throws SyntaxError on anything but 0/1.
inline std::vector<std::uint8_t> parse_bits(std::string_view s) {
  std::vector<std::uint8_t> bits;
  for (char c : s) {
    if (c != '0' && c != '1') throw Error(Errc::SyntaxError, "message must be a string of 0/1");
    bits.push_back(c == '1' ? 1 : 0);
  }
  return bits;
}

inline std::string format_bits(std::span<const std::uint8_t> bits) {
  std::string s;
  for (auto b : bits) s += b ? '1' : '0';
  return s;
}

}  // namespace dcsim
