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
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcsim/cache_memory.hpp"
#include "dcsim/error.hpp"
#include "dcsim/geometry.hpp"

namespace dcsim {

using TxId = std::uint64_t;

inline constexpr std::size_t kWordBytes = 8;

/// Per-byte write-buffer status.
///
///   valid dirty txblock
///     0     0     0      invalid, slot free
///     1     1     0      written, not yet sent
///     1     0     1      part of an inflight transaction
///     1     1     1      overwritten while inflight, resend after the ack
///
/// (1,0,0) is unreachable.
struct ByteStatus {
  bool valid = false;
  bool dirty = false;
  bool txblock = false;

  unsigned bits() const { return (valid ? 4u : 0u) | (dirty ? 2u : 0u) | (txblock ? 1u : 0u); }
  bool reachable() const { return bits() == 0b000 || bits() == 0b110 || bits() == 0b101 || bits() == 0b111; }
  bool operator==(const ByteStatus&) const = default;
};

inline constexpr ByteStatus kInvalid{false, false, false};
inline constexpr ByteStatus kDirty{true, true, false};
inline constexpr ByteStatus kInflight{true, false, true};
inline constexpr ByteStatus kDirtyInflight{true, true, true};

struct WriteBufferEntry {
  Addr base = 0;
  std::array<std::uint8_t, kWordBytes> data{};
  std::array<ByteStatus, kWordBytes> status{};
  std::optional<TxId> tx;
};

/// A write-through memory transaction carrying the bytes selected by `mask`.
struct MemoryWriteTx {
  TxId id = 0;
  Addr base = 0;
  std::array<std::uint8_t, kWordBytes> data{};
  std::uint8_t mask = 0;
};

enum class StoreStatus { Accepted, Full };

struct StoreOutcome {
  StoreStatus status = StoreStatus::Accepted;
  // Way whose bytes were updated when the line was already cached.
  std::optional<unsigned> cache_way;
};

struct Forwarded {
  std::vector<std::uint8_t> data;
  // Bit i set when byte i of the request came from the buffer.
  std::uint8_t mask = 0;
};

/// Fully associative, coalescing store buffer with one 64-bit word per entry.
/// Entries are kept in allocation order, which is also the issue order.
class WriteBuffer {
 public:
  WriteBuffer(std::size_t capacity, std::size_t max_tx) : capacity_(capacity), max_tx_(max_tx) {}

  /// Merges a store into the entry for its word, allocating one if needed.
  /// When the line is resident in `cache` its bytes are updated in place; an
  /// absent line is never allocated.
  StoreOutcome store(Addr addr, std::span<const std::uint8_t> data, CacheMemory& cache) {
    const std::size_t in_word = addr % kWordBytes;
    if (!std::has_single_bit(data.size()) || in_word + data.size() > kWordBytes ||
        addr % data.size() != 0)
      throw Error(Errc::Misaligned, "store must be naturally aligned within one 64-bit word");
    const Addr base = addr - in_word;
    WriteBufferEntry* entry = find(base);
    if (entry == nullptr) {
      if (entries_.size() >= capacity_) return {StoreStatus::Full, std::nullopt};
      entries_.push_back(WriteBufferEntry{base, {}, {}, std::nullopt});
      entry = &entries_.back();
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      ByteStatus& st = entry->status[in_word + i];
      entry->data[in_word + i] = data[i];
      st = st.txblock ? kDirtyInflight : kDirty;
    }

    StoreOutcome out;
    const CacheConfig& cfg = cache.config();
    const DecomposedAddress d = decompose(addr, cfg);
    if (const Lookup lk = cache.lookup(d.index, d.tag); lk.hit()) {
      cache.write_bytes(d.index, *lk.way, d.offset, data);
      out.cache_way = lk.way;
    }
    return out;
  }

  /// Sends the dirty, not-yet-inflight bytes of the oldest eligible entry.
  /// Entries that already own a transaction wait for its acknowledgement.
  std::optional<MemoryWriteTx> issue() {
    if (inflight_ >= max_tx_) return std::nullopt;
    for (WriteBufferEntry& e : entries_) {
      if (e.tx) continue;
      MemoryWriteTx tx;
      for (std::size_t i = 0; i < kWordBytes; ++i) {
        if (e.status[i] == kDirty) {
          tx.mask |= static_cast<std::uint8_t>(1u << i);
          tx.data[i] = e.data[i];
          e.status[i] = kInflight;
        }
      }
      if (tx.mask == 0) continue;
      tx.id = next_tx_++;
      tx.base = e.base;
      e.tx = tx.id;
      ++inflight_;
      return tx;
    }
    return std::nullopt;
  }

  /// Acknowledges a transaction. Bytes rewritten while inflight become dirty
  /// again and will be resent; entries left with no valid byte are freed.
  void complete(TxId id) {
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [id](const WriteBufferEntry& e) { return e.tx == id; });
    if (it == entries_.end()) throw Error(Errc::UnknownTx, "transaction " + std::to_string(id));
    for (ByteStatus& st : it->status) {
      if (st == kInflight) st = kInvalid;
      else if (st == kDirtyInflight) st = kDirty;
    }
    it->tx.reset();
    --inflight_;
    if (std::none_of(it->status.begin(), it->status.end(), [](const ByteStatus& s) { return s.valid; }))
      entries_.erase(it);
  }

  /// Buffered bytes overlapping [addr, addr+size). Only valid bytes are
  /// supplied; the caller fills the rest from the cache or memory.
  std::optional<Forwarded> forward(Addr addr, std::size_t size) const {
    const std::size_t in_word = addr % kWordBytes;
    if (size == 0 || in_word + size > kWordBytes)
      throw Error(Errc::Misaligned, "forwarding window must stay within one 64-bit word");
    const WriteBufferEntry* e = find(addr - in_word);
    if (e == nullptr) return std::nullopt;
    Forwarded out{std::vector<std::uint8_t>(size, 0), 0};
    for (std::size_t i = 0; i < size; ++i) {
      if (e->status[in_word + i].valid) {
        out.data[i] = e->data[in_word + i];
        out.mask |= static_cast<std::uint8_t>(1u << i);
      }
    }
    if (out.mask == 0) return std::nullopt;
    return out;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::size_t inflight() const { return inflight_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t max_tx() const { return max_tx_; }
  std::span<const WriteBufferEntry> entries() const { return entries_; }

  /// Structural self-check used by property tests. Returns a description of
  /// the first violation, if any.
  std::optional<std::string> check_invariants() const {
    if (entries_.size() > capacity_) return "occupancy exceeds capacity";
    if (inflight_ > max_tx_) return "inflight exceeds max_tx";
    std::size_t with_tx = 0;
    for (std::size_t a = 0; a < entries_.size(); ++a) {
      const WriteBufferEntry& e = entries_[a];
      bool any_valid = false;
      bool any_block = false;
      for (const ByteStatus& st : e.status) {
        if (!st.reachable()) return "unreachable byte status " + std::to_string(st.bits());
        any_valid |= st.valid;
        any_block |= st.txblock;
      }
      if (!any_valid) return "entry with no valid byte was not freed";
      if (any_block != e.tx.has_value()) return "tx id does not match txblock bits";
      with_tx += e.tx ? 1 : 0;
      for (std::size_t b = a + 1; b < entries_.size(); ++b)
        if (entries_[b].base == e.base) return "two entries for one word";
    }
    if (with_tx != inflight_) return "inflight counter out of sync";
    return std::nullopt;
  }

 private:
  WriteBufferEntry* find(Addr base) {
    for (auto& e : entries_)
      if (e.base == base) return &e;
    return nullptr;
  }
  const WriteBufferEntry* find(Addr base) const {
    for (const auto& e : entries_)
      if (e.base == base) return &e;
    return nullptr;
  }

  std::size_t capacity_;
  std::size_t max_tx_;
  std::size_t inflight_ = 0;
  TxId next_tx_ = 1;
  std::vector<WriteBufferEntry> entries_;
};

}  // namespace dcsim
