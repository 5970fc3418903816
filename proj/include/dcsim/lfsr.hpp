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

#include <array>
#include <cstdint>
#include <string>

#include "dcsim/error.hpp"
#include "dcsim/geometry.hpp"

namespace dcsim {

// Maximal-length feedback masks for a right-shifting Galois LFSR, one per
// width from 4 to 64 bits. Entry i belongs to width i + 4.
inline constexpr std::array<std::uint64_t, kMaxLfsrWidth - kMinLfsrWidth + 1> kGaloisMasks = {
    0x9ULL,  // 4
    0x12ULL,  // 5
    0x21ULL,  // 6
    0x41ULL,  // 7
    0xC3ULL,  // 8
    0x108ULL,  // 9
    0x204ULL,  // 10
    0x402ULL,  // 11
    0x883ULL,  // 12
    0x1013ULL,  // 13
    0x2803ULL,  // 14
    0x4001ULL,  // 15
    0x8805ULL,  // 16
    0x10004ULL,  // 17
    0x20040ULL,  // 18
    0x40013ULL,  // 19
    0x80004ULL,  // 20
    0x100002ULL,  // 21
    0x200001ULL,  // 22
    0x400010ULL,  // 23
    0x800043ULL,  // 24
    0x1000004ULL,  // 25
    0x2000023ULL,  // 26
    0x4000013ULL,  // 27
    0x8000004ULL,  // 28
    0x10000002ULL,  // 29
    0x20400003ULL,  // 30
    0x40000004ULL,  // 31
    0x80200003ULL,  // 32
    0x100001000ULL,  // 33
    0x204000003ULL,  // 34
    0x400000002ULL,  // 35
    0x800000400ULL,  // 36
    0x1000000103ULL,  // 37
    0x2000001005ULL,  // 38
    0x4000000008ULL,  // 39
    0x8400000003ULL,  // 40
    0x10000000004ULL,  // 41
    0x20010000003ULL,  // 42
    0x40000000803ULL,  // 43
    0x82000000005ULL,  // 44
    0x10000000000DULL,  // 45
    0x200000000105ULL,  // 46
    0x400000000010ULL,  // 47
    0x800008000005ULL,  // 48
    0x1000000000100ULL,  // 49
    0x2000000008003ULL,  // 50
    0x4000008000003ULL,  // 51
    0x8000000000004ULL,  // 52
    0x10000000000023ULL,  // 53
    0x20000000010003ULL,  // 54
    0x40000000800000ULL,  // 55
    0x80020000000003ULL,  // 56
    0x100000000000040ULL,  // 57
    0x200000000040000ULL,  // 58
    0x400000000800003ULL,  // 59
    0x800000000000001ULL,  // 60
    0x1000000000000013ULL,  // 61
    0x2000000008000005ULL,  // 62
    0x4000000000000001ULL,  // 63
    0x8000000000000403ULL,  // 64
};

inline std::uint64_t galois_mask(unsigned width) {
  if (width < kMinLfsrWidth || width > kMaxLfsrWidth)
    throw Error(Errc::WidthOutOfRange, "lfsr width " + std::to_string(width));
  return kGaloisMasks[width - kMinLfsrWidth];
}

/// Galois LFSR driving pseudo-random victim selection.
///
/// One step shifts the state right by one bit; when the bit shifted out was
/// set, the state is XORed with the feedback mask. The state never reaches
/// zero, which is a fixed point of the recurrence.
class Lfsr {
 public:
  /// A zero seed (after truncation to `width` bits) is replaced by all-ones.
  Lfsr(unsigned width, std::uint64_t seed) : width_(width), mask_(galois_mask(width)) {
    state_ = seed & detail::low_mask(width_);
    if (state_ == 0) state_ = detail::low_mask(width_);
  }

  std::uint64_t step() {
    const bool out = (state_ & 1u) != 0;
    state_ >>= 1;
    if (out) state_ ^= mask_;
    return state_;
  }

  // Output whitening point. Identity: no nonlinear layers are modeled.
  std::uint64_t output() const { return state_; }

  /// Victim way from the low bits of the output; with 8 ways this is the
  /// three least significant bits. Does not advance the register.
  unsigned victim_index(std::uint32_t num_ways = 8) const {
    if ((num_ways & (num_ways - 1)) == 0) return static_cast<unsigned>(output() & (num_ways - 1));
    return static_cast<unsigned>(output() % num_ways);
  }

  unsigned width() const { return width_; }
  std::uint64_t state() const { return state_; }
  std::uint64_t feedback_mask() const { return mask_; }

  bool operator==(const Lfsr&) const = default;

 private:
  unsigned width_;
  std::uint64_t mask_;
  std::uint64_t state_;
};

}  // namespace dcsim
