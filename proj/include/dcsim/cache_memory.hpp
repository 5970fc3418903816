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
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcsim/error.hpp"
#include "dcsim/geometry.hpp"

namespace dcsim {

/// One tag-array slot: a valid bit plus the tag. The tag is never compared
/// when the slot is invalid.
struct TagEntry {
  bool valid = false;
  std::uint64_t tag = 0;
};

/// Result of a tag-array lookup. On a miss `way` is empty and `valid_mask`
/// carries the per-way valid bits of the set for victim selection.
struct Lookup {
  std::optional<unsigned> way;
  std::uint64_t valid_mask = 0;

  bool hit() const { return way.has_value(); }
};

/// The data cache memory: a tag array made of one matrix per way, and a data
/// array split into two banks. Bank 0 holds the low half of every line and
/// bank 1 the high half, so a 16-byte line is two 64-bit bank words.
class CacheMemory {
 public:
  explicit CacheMemory(const CacheConfig& cfg)
      : cfg_(cfg),
        tags_(cfg.num_ways, std::vector<TagEntry>(cfg.num_sets)),
        banks_{std::vector<std::uint8_t>(cfg.num_sets * cfg.num_ways * cfg.bank_bytes()),
               std::vector<std::uint8_t>(cfg.num_sets * cfg.num_ways * cfg.bank_bytes())} {
    validate_config(cfg);
  }

  const CacheConfig& config() const { return cfg_; }

  Lookup lookup(std::uint64_t index, std::uint64_t tag) const {
    check_index(index);
    Lookup out;
    for (unsigned w = 0; w < cfg_.num_ways; ++w) {
      const TagEntry& e = tags_[w][index];
      if (!e.valid) continue;
      out.valid_mask |= std::uint64_t{1} << w;
      if (e.tag == tag) out.way = w;
    }
    return out;
  }

  std::uint64_t valid_mask(std::uint64_t index) const {
    check_index(index);
    std::uint64_t mask = 0;
    for (unsigned w = 0; w < cfg_.num_ways; ++w)
      if (tags_[w][index].valid) mask |= std::uint64_t{1} << w;
    return mask;
  }

  const TagEntry& tag_entry(std::uint64_t index, unsigned way) const {
    check_slot(index, way);
    return tags_[way][index];
  }

  /// Bytes [offset, offset+size) of a valid way. The span must stay inside
  /// one bank word; bytes are little-endian within the word.
  std::vector<std::uint8_t> read_bytes(std::uint64_t index, unsigned way, std::uint64_t offset,
                                       std::size_t size) const {
    check_access(index, way, offset, size);
    const std::uint8_t* word = bank_word_ptr(bank_select(offset, cfg_.line_bytes), index, way);
    const std::uint64_t in_word = offset % cfg_.bank_bytes();
    return {word + in_word, word + in_word + size};
  }

  void write_bytes(std::uint64_t index, unsigned way, std::uint64_t offset,
                   std::span<const std::uint8_t> data) {
    check_access(index, way, offset, data.size());
    std::uint8_t* word = bank_word_ptr(bank_select(offset, cfg_.line_bytes), index, way);
    const std::uint64_t in_word = offset % cfg_.bank_bytes();
    std::copy(data.begin(), data.end(), word + in_word);
  }

  /// Installs a whole line: the low half goes to bank 0, the high half to
  /// bank 1, and the tag slot becomes valid.
  void fill_line(std::uint64_t index, unsigned way, std::uint64_t tag,
                 std::span<const std::uint8_t> data) {
    check_slot(index, way);
    if (data.size() != cfg_.line_bytes)
      throw Error(Errc::OutOfRange, "fill data must be exactly one line");
    for (unsigned w = 0; w < cfg_.num_ways; ++w) {
      if (w != way && tags_[w][index].valid && tags_[w][index].tag == tag)
        throw Error(Errc::DuplicateTag, "tag already resident in way " + std::to_string(w));
    }
    const std::size_t half = cfg_.bank_bytes();
    std::copy(data.begin(), data.begin() + half, bank_word_ptr(0, index, way));
    std::copy(data.begin() + half, data.end(), bank_word_ptr(1, index, way));
    tags_[way][index] = {true, tag};
  }

  void invalidate(std::uint64_t index, unsigned way) {
    check_slot(index, way);
    tags_[way][index].valid = false;
  }

  /// Clears every valid bit, leaving data untouched. Returns how many lines
  /// were valid.
  std::size_t flush_all() {
    std::size_t n = 0;
    for (auto& matrix : tags_) {
      for (auto& e : matrix) {
        n += e.valid ? 1 : 0;
        e.valid = false;
      }
    }
    return n;
  }

  std::size_t valid_lines() const {
    std::size_t n = 0;
    for (const auto& matrix : tags_)
      for (const auto& e : matrix) n += e.valid ? 1 : 0;
    return n;
  }

  /// Raw bank word, regardless of the valid bit.
  std::span<const std::uint8_t> bank_word(unsigned bank, std::uint64_t index, unsigned way) const {
    check_slot(index, way);
    if (bank > 1) throw Error(Errc::OutOfRange, "bank must be 0 or 1");
    return {bank_word_ptr(bank, index, way), cfg_.bank_bytes()};
  }

  /// Text dump of the tag array, one set per line:
  /// `set 01: - - - - - - - 000000008000b`, `-` marking an invalid way.
  std::string dump_tags() const {
    const int set_digits = std::max(1, static_cast<int>((cfg_.index_bits() + 3) / 4));
    const int tag_digits = static_cast<int>((cfg_.tag_bits() + 3) / 4);
    std::string out;
    char buf[32];
    for (std::uint64_t s = 0; s < cfg_.num_sets; ++s) {
      std::snprintf(buf, sizeof buf, "set %0*llx:", set_digits, static_cast<unsigned long long>(s));
      out += buf;
      for (unsigned w = 0; w < cfg_.num_ways; ++w) {
        const TagEntry& e = tags_[w][s];
        if (e.valid) {
          std::snprintf(buf, sizeof buf, " %0*llx", tag_digits, static_cast<unsigned long long>(e.tag));
          out += buf;
        } else {
          out += " -";
        }
      }
      out += '\n';
    }
    return out;
  }

 private:
  void check_index(std::uint64_t index) const {
    if (index >= cfg_.num_sets) throw Error(Errc::OutOfRange, "set index " + std::to_string(index));
  }

  void check_slot(std::uint64_t index, unsigned way) const {
    check_index(index);
    if (way >= cfg_.num_ways) throw Error(Errc::OutOfRange, "way " + std::to_string(way));
  }

  void check_access(std::uint64_t index, unsigned way, std::uint64_t offset, std::size_t size) const {
    check_slot(index, way);
    if (offset >= cfg_.line_bytes) throw Error(Errc::OutOfRange, "offset beyond line");
    if (size == 0 || offset % cfg_.bank_bytes() + size > cfg_.bank_bytes())
      throw Error(Errc::UnalignedCrossBank, "access of " + std::to_string(size) +
                                                " bytes at offset " + std::to_string(offset));
    if (!tags_[way][index].valid)
      throw Error(Errc::InvalidWay, "way " + std::to_string(way) + " of set " +
                                        std::to_string(index) + " is not valid");
  }

  std::size_t word_base(std::uint64_t index, unsigned way) const {
    return (index * cfg_.num_ways + way) * cfg_.bank_bytes();
  }
  std::uint8_t* bank_word_ptr(unsigned bank, std::uint64_t index, unsigned way) {
    return banks_[bank].data() + word_base(index, way);
  }
  const std::uint8_t* bank_word_ptr(unsigned bank, std::uint64_t index, unsigned way) const {
    return banks_[bank].data() + word_base(index, way);
  }

  CacheConfig cfg_;
  // tags_[way][set]: matrix n holds the tags of way n.
  std::vector<std::vector<TagEntry>> tags_;
  std::array<std::vector<std::uint8_t>, 2> banks_;
};

}  // namespace dcsim
