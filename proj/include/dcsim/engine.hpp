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
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dcsim/amo_buffer.hpp"
#include "dcsim/cache_memory.hpp"
#include "dcsim/error.hpp"
#include "dcsim/geometry.hpp"
#include "dcsim/lfsr.hpp"
#include "dcsim/main_memory.hpp"
#include "dcsim/miss_unit.hpp"
#include "dcsim/mshr.hpp"
#include "dcsim/write_buffer.hpp"

namespace dcsim {

enum class RequestKind { Load, Store, Amo, Flush };

constexpr std::string_view to_string(RequestKind k) {
  switch (k) {
    case RequestKind::Load: return "Load";
    case RequestKind::Store: return "Store";
    case RequestKind::Amo: return "Amo";
    case RequestKind::Flush: return "Flush";
  }
  return "?";
}

/// One CPU-side request. Store data and AMO operands are bytes in address
/// order; an AMO always works on an aligned 64-bit word.
struct CpuRequest {
  RequestKind kind = RequestKind::Load;
  Addr addr = 0;
  std::size_t size = 0;
  std::vector<std::uint8_t> data;
  std::optional<AmoOp> amo_op;

  static CpuRequest load(Addr addr, std::size_t size) { return {RequestKind::Load, addr, size, {}, {}}; }
  static CpuRequest store(Addr addr, std::vector<std::uint8_t> bytes) {
    const std::size_t n = bytes.size();
    return {RequestKind::Store, addr, n, std::move(bytes), {}};
  }
  static CpuRequest amo(AmoOp op, Addr addr, std::uint64_t operand) {
    const auto b = store_le64(operand);
    return {RequestKind::Amo, addr, 8, {b.begin(), b.end()}, op};
  }
  static CpuRequest flush() { return {RequestKind::Flush, 0, 0, {}, {}}; }

  bool operator==(const CpuRequest&) const = default;
};

inline void validate_request(const CpuRequest& r) {
  switch (r.kind) {
    case RequestKind::Flush:
      return;
    case RequestKind::Amo:
      if (!r.amo_op) throw Error(Errc::UnknownOp, "AMO request without an operation");
      if (r.size != 8) throw Error(Errc::BadSize, "AMO requests operate on 8 bytes");
      break;
    case RequestKind::Load:
    case RequestKind::Store:
      if (r.size != 1 && r.size != 2 && r.size != 4 && r.size != 8)
        throw Error(Errc::BadSize, "size " + std::to_string(r.size));
      break;
  }
  if (r.addr % r.size != 0) throw Error(Errc::Misaligned, "address not aligned to its size");
  const bool needs_data = r.kind == RequestKind::Store || r.kind == RequestKind::Amo;
  if (needs_data != !r.data.empty() || (needs_data && r.data.size() != r.size))
    throw Error(Errc::BadSize, "payload does not match the request size");
}

enum class Outcome { Hit, Miss, WriteThrough, AmoDone, FlushDone };

constexpr std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Hit: return "Hit";
    case Outcome::Miss: return "Miss";
    case Outcome::WriteThrough: return "WriteThrough";
    case Outcome::AmoDone: return "AmoDone";
    case Outcome::FlushDone: return "FlushDone";
  }
  return "?";
}

struct Eviction {
  std::uint64_t tag = 0;
  unsigned way = 0;
  bool operator==(const Eviction&) const = default;
};

struct AccessResult {
  RequestKind kind = RequestKind::Load;
  Outcome outcome = Outcome::Hit;
  std::uint64_t set = 0;
  std::optional<unsigned> way;
  std::optional<Eviction> evicted;
  std::uint64_t stall_cycles = 0;
  std::uint64_t latency_cycles = 0;
  std::vector<std::uint8_t> data;

  bool operator==(const AccessResult&) const = default;
};

struct Stats {
  std::uint64_t loads = 0;
  std::uint64_t stores = 0;
  std::uint64_t amos = 0;
  std::uint64_t flushes = 0;
  std::uint64_t load_hits = 0;
  std::uint64_t load_misses = 0;
  std::uint64_t evictions = 0;
  std::uint64_t stalls = 0;
  std::uint64_t total_cycles = 0;
  std::vector<std::uint64_t> per_set_miss_counts;

  bool operator==(const Stats&) const = default;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["loads"] = loads;
    j["stores"] = stores;
    j["amos"] = amos;
    j["flushes"] = flushes;
    j["load_hits"] = load_hits;
    j["load_misses"] = load_misses;
    j["evictions"] = evictions;
    j["stalls"] = stalls;
    j["total_cycles"] = total_cycles;
    j["per_set_miss_counts"] = per_set_miss_counts;
    return j;
  }

  /// gem5-style `name value` listing; only sets that missed are listed.
  std::string to_text() const {
    std::ostringstream os;
    auto row = [&os](const std::string& name, std::uint64_t v) {
      os << name;
      for (std::size_t i = name.size(); i < 32; ++i) os << ' ';
      os << v << '\n';
    };
    row("dcache.loads", loads);
    row("dcache.stores", stores);
    row("dcache.amos", amos);
    row("dcache.flushes", flushes);
    row("dcache.load_hits", load_hits);
    row("dcache.load_misses", load_misses);
    row("dcache.evictions", evictions);
    row("dcache.stalls", stalls);
    row("dcache.total_cycles", total_cycles);
    for (std::size_t s = 0; s < per_set_miss_counts.size(); ++s)
      if (per_set_miss_counts[s] != 0) row("dcache.set_misses::" + std::to_string(s), per_set_miss_counts[s]);
    return os.str();
  }
};

/// Why a request could not start in the current cycle.
enum class WaitReason {
  WriteCollidesMshr,
  ReadOverlapsAmo,
  MshrBusy,
  MissUnitBusy,
  WriteBufferFull,
  AmoPending,
};

constexpr std::string_view to_string(WaitReason r) {
  switch (r) {
    case WaitReason::WriteCollidesMshr: return "WriteCollidesMshr";
    case WaitReason::ReadOverlapsAmo: return "ReadOverlapsAmo";
    case WaitReason::MshrBusy: return "MshrBusy";
    case WaitReason::MissUnitBusy: return "MissUnitBusy";
    case WaitReason::WriteBufferFull: return "WriteBufferFull";
    case WaitReason::AmoPending: return "AmoPending";
  }
  return "?";
}

struct StallRecord {
  std::size_t ticket = 0;
  WaitReason reason = WaitReason::MissUnitBusy;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
};

struct FsmLogEntry {
  std::uint64_t cycle = 0;
  MissState from = MissState::Idle;
  MissEvent event = MissEvent::ReadMiss;
  MissState to = MissState::Idle;
};

inline std::string format_fsm_log(const std::vector<FsmLogEntry>& log) {
  std::string out;
  for (const auto& e : log) {
    out += std::to_string(e.cycle) + ' ' + std::string(to_string(e.from)) + ' ' +
           std::string(to_string(e.event)) + ' ' + std::string(to_string(e.to)) + '\n';
  }
  return out;
}

// Write acknowledgements arrive this many cycles after the transaction issues.
inline constexpr std::uint64_t kStoreAckDelay = 2;

/// Cycle-level model of the whole data-cache subsystem.
///
/// Requests enter through step() (architectural order: each request retires
/// before the next one starts) or submit() (returns once the request has
/// started, so later requests can overlap a pending load miss or AMO). All
/// memory traffic is driven by a single event queue ordered by (cycle,
/// insertion), which makes every run a pure function of config, seed, and
/// request sequence.
class Engine {
 public:
  explicit Engine(const CacheConfig& cfg = {}, std::uint64_t seed = 1)
      : cfg_(checked(cfg)),
        cache_(cfg_),
        wb_(cfg_.write_buffer_capacity, cfg_.max_tx),
        mshr_(cfg_.line_bytes, cfg_.mshr_collision),
        lfsr_(cfg_.lfsr_width, seed) {
    stats_.per_set_miss_counts.assign(cfg_.num_sets, 0);
  }

  AccessResult step(const CpuRequest& req) {
    const std::size_t t = submit(req);
    while (!results_[t]) process_one_event();
    advance_to(retire_[t]);
    return *results_[t];
  }

  /// Starts a request, waiting (and charging stall cycles) while a hazard
  /// blocks it. Returns the ticket under which its result will appear.
  std::size_t submit(const CpuRequest& req) {
    validate_request(req);
    const std::size_t ticket = results_.size();
    results_.emplace_back();
    retire_.push_back(0);
    std::uint64_t stall = 0;
    bool counted = false;
    for (;;) {
      const std::optional<WaitReason> wait = try_start(ticket, req, stall);
      if (!wait) break;
      if (!counted) {
        ++stats_.stalls;
        counted = true;
      }
      if (stall_log_.empty() || stall_log_.back().ticket != ticket || stall_log_.back().reason != *wait) {
        if (!stall_log_.empty() && stall_log_.back().ticket == ticket) stall_log_.back().end = now_;
        stall_log_.push_back({ticket, *wait, now_, now_});
      }
      const std::uint64_t before = now_;
      process_one_event();
      stall += now_ - before;
    }
    if (counted) stall_log_.back().end = now_;
    return ticket;
  }

  /// Waits for every started request to retire.
  void run() {
    while (load_ || amo_) process_one_event();
    for (std::size_t t = 0; t < retire_.size(); ++t)
      if (results_[t]) now_ = std::max(now_, retire_[t]);
  }

  /// run(), then waits until the write buffer has written everything back.
  void drain() {
    run();
    while (!wb_.empty()) {
      try_issue_stores();
      process_one_event();
    }
  }

  bool quiesced() const { return wb_.empty() && wb_.inflight() == 0 && !load_ && !amo_; }

  bool retired(std::size_t ticket) const { return ticket < results_.size() && results_[ticket].has_value(); }
  const AccessResult& result(std::size_t ticket) const {
    if (!retired(ticket)) throw std::out_of_range("request has not retired");
    return *results_[ticket];
  }
  std::size_t submitted() const { return results_.size(); }

  Stats stats() const {
    Stats s = stats_;
    s.total_cycles = now_;
    return s;
  }

  const CacheConfig& config() const { return cfg_; }
  const CacheMemory& cache() const { return cache_; }
  const MainMemory& memory() const { return mem_; }
  MainMemory& memory() { return mem_; }
  const WriteBuffer& write_buffer() const { return wb_; }
  const Mshr& mshr() const { return mshr_; }
  const AmoBuffer& amo_buffer() const { return amo_buf_; }
  const Lfsr& lfsr() const { return lfsr_; }
  MissState state() const { return fsm_; }
  std::uint64_t now() const { return now_; }
  std::uint64_t lfsr_advances() const { return lfsr_advances_; }

  void set_fsm_logging(bool on) { log_fsm_ = on; }
  const std::vector<FsmLogEntry>& fsm_log() const { return fsm_log_; }
  const std::vector<StallRecord>& stall_log() const { return stall_log_; }

 private:
  enum class EventKind { LoadDone, StoreDone, AmoDone };

  struct Event {
    std::uint64_t due;
    std::uint64_t seq;
    EventKind kind;
    TxId tx;
    bool operator>(const Event& o) const { return due != o.due ? due > o.due : seq > o.seq; }
  };

  struct PendingLoad {
    std::size_t ticket;
    CpuRequest req;
    std::uint64_t start;
    std::uint64_t stall;
    unsigned way = 0;
    std::optional<Eviction> evicted;
  };

  struct PendingAmo {
    std::size_t ticket;
    CpuRequest req;
    std::uint64_t start;
    std::uint64_t stall;
    std::uint64_t issued = 0;
  };

  static const CacheConfig& checked(const CacheConfig& cfg) {
    validate_config(cfg);
    return cfg;
  }

  void schedule(std::uint64_t delay, EventKind kind, TxId tx = 0) {
    events_.push({now_ + delay, seq_++, kind, tx});
  }

  void retire(std::size_t ticket, AccessResult r, std::uint64_t at) {
    results_[ticket] = std::move(r);
    retire_[ticket] = at;
  }

  Transition dispatch(MissEvent ev, const FsmContext& ctx = {}) {
    Transition t = fsm_step(fsm_, ev, ctx);
    if (log_fsm_) fsm_log_.push_back({now_, fsm_, ev, t.next});
    fsm_ = t.next;
    return t;
  }

  void advance_to(std::uint64_t t) {
    while (!events_.empty() && events_.top().due <= t) process_one_event();
    now_ = std::max(now_, t);
  }

  void process_one_event() {
    if (events_.empty()) throw std::logic_error("engine deadlock: waiting with no pending events");
    const Event ev = events_.top();
    events_.pop();
    now_ = std::max(now_, ev.due);
    switch (ev.kind) {
      case EventKind::LoadDone: on_load_done(); break;
      case EventKind::StoreDone: on_store_done(ev.tx); break;
      case EventKind::AmoDone: on_amo_done(); break;
    }
  }

  std::optional<WaitReason> try_start(std::size_t ticket, const CpuRequest& req, std::uint64_t stall) {
    switch (req.kind) {
      case RequestKind::Load: return start_load(ticket, req, stall);
      case RequestKind::Store: return start_store(ticket, req, stall);
      case RequestKind::Amo: return start_amo(ticket, req, stall);
      case RequestKind::Flush: return start_flush(ticket, stall);
    }
    return std::nullopt;
  }

  std::optional<WaitReason> start_load(std::size_t ticket, const CpuRequest& req, std::uint64_t stall) {
    // Until the AMO is issued its line may still be cached with stale data.
    if (amo_buf_.valid() && !amo_buf_.inflight()) return WaitReason::AmoPending;
    const DecomposedAddress d = decompose(req.addr, cfg_);
    const Lookup lk = cache_.lookup(d.index, d.tag);
    if (lk.hit()) {
      ++stats_.loads;
      ++stats_.load_hits;
      AccessResult r{RequestKind::Load, Outcome::Hit, d.index, lk.way, std::nullopt, stall,
                     cfg_.hit_latency, read_load_data(req.addr, req.size)};
      retire(ticket, std::move(r), now_ + cfg_.hit_latency);
      advance_to(now_ + cfg_.hit_latency);
      return std::nullopt;
    }
    const StallReason hazard = check_stall(AccessKind::Read, req.addr, req.size, mshr_, amo_buf_, cfg_.line_bytes);
    if (hazard != StallReason::None) {
      if (fsm_ == MissState::Idle) dispatch(MissEvent::ReadMiss, {wb_.inflight(), cfg_.max_tx, true});
      return WaitReason::ReadOverlapsAmo;
    }
    if (mshr_.valid()) return WaitReason::MshrBusy;
    if (fsm_ != MissState::Idle) return WaitReason::MissUnitBusy;

    ++stats_.loads;
    ++stats_.load_misses;
    ++stats_.per_set_miss_counts[d.index];
    mshr_.allocate(req.addr, req.size, next_miss_id_++);
    const Transition t = dispatch(MissEvent::ReadMiss, {wb_.inflight(), cfg_.max_tx, false});
    if (t.actions.contains(MissAction::IssueMemLoad)) schedule(cfg_.miss_latency, EventKind::LoadDone);
    load_ = PendingLoad{ticket, req, now_, stall, 0, std::nullopt};
    advance_to(now_ + cfg_.hit_latency);
    return std::nullopt;
  }

  std::optional<WaitReason> start_store(std::size_t ticket, const CpuRequest& req, std::uint64_t stall) {
    if (amo_buf_.valid()) return WaitReason::AmoPending;
    if (check_stall(AccessKind::Write, req.addr, req.size, mshr_, amo_buf_, cfg_.line_bytes) !=
        StallReason::None)
      return WaitReason::WriteCollidesMshr;
    const StoreOutcome out = wb_.store(req.addr, req.data, cache_);
    if (out.status == StoreStatus::Full) {
      try_issue_stores();
      return WaitReason::WriteBufferFull;
    }
    ++stats_.stores;
    const DecomposedAddress d = decompose(req.addr, cfg_);
    AccessResult r{RequestKind::Store, Outcome::WriteThrough, d.index, out.cache_way, std::nullopt,
                   stall, cfg_.hit_latency, {}};
    retire(ticket, std::move(r), now_ + cfg_.hit_latency);
    try_issue_stores();
    advance_to(now_ + cfg_.hit_latency);
    return std::nullopt;
  }

  std::optional<WaitReason> start_amo(std::size_t ticket, const CpuRequest& req, std::uint64_t stall) {
    if (amo_buf_.valid()) return WaitReason::AmoPending;
    if (fsm_ != MissState::Idle) return WaitReason::MissUnitBusy;
    amo_buf_.accept(*req.amo_op, req.addr, load_le64(req.data));
    ++stats_.amos;
    dispatch(MissEvent::AmoReq);
    amo_ = PendingAmo{ticket, req, now_, stall, 0};
    try_issue_stores();
    check_drain();
    return std::nullopt;
  }

  std::optional<WaitReason> start_flush(std::size_t ticket, std::uint64_t stall) {
    if (fsm_ != MissState::Idle) return WaitReason::MissUnitBusy;
    ++stats_.flushes;
    const Transition t = dispatch(MissEvent::FlushReq);
    if (t.actions.contains(MissAction::InvalidateAll)) cache_.flush_all();
    dispatch(MissEvent::FlushDone);
    retire(ticket, {RequestKind::Flush, Outcome::FlushDone, 0, std::nullopt, std::nullopt, stall, cfg_.hit_latency, {}},
           now_ + cfg_.hit_latency);
    advance_to(now_ + cfg_.hit_latency);
    return std::nullopt;
  }

  void try_issue_stores() {
    while ((fsm_ == MissState::Idle || fsm_ == MissState::LoadWait || fsm_ == MissState::Drain) &&
           wb_.inflight() < cfg_.max_tx) {
      std::optional<MemoryWriteTx> tx = wb_.issue();
      if (!tx) break;
      const Transition t = dispatch(MissEvent::StoreIssue, {wb_.inflight(), cfg_.max_tx, false});
      if (t.actions.contains(MissAction::IssueMemStore)) {
        inflight_txs_.push_back(*tx);
        schedule(kStoreAckDelay, EventKind::StoreDone, tx->id);
      }
    }
  }

  void check_drain() {
    if (fsm_ != MissState::Drain || !wb_.empty() || mshr_.valid()) return;
    dispatch(MissEvent::DrainComplete);
    const std::optional<AmoRequest> req = amo_buf_.issue(wb_.empty());
    if (!req) throw std::logic_error("drain completed without a buffered AMO");
    const Transition t = dispatch(MissEvent::AmoIssue);
    if (t.actions.contains(MissAction::IssueAmoToMemory)) {
      // The AMO executes in memory; a cached copy of its line is dropped.
      const DecomposedAddress d = decompose(req->addr, cfg_);
      if (const Lookup lk = cache_.lookup(d.index, d.tag); lk.hit()) cache_.invalidate(d.index, *lk.way);
      amo_->issued = now_;
      schedule(cfg_.miss_latency, EventKind::AmoDone);
    }
  }

  void on_load_done() {
    const Transition t = dispatch(MissEvent::MemLoadDone);
    for (MissAction a : t.actions) {
      if (a == MissAction::WriteLineToCache) write_line_to_cache();
      else if (a == MissAction::ClearMshr) mshr_.clear();
    }
    PendingLoad& p = *load_;
    const std::uint64_t latency = now_ - p.start + cfg_.hit_latency;
    AccessResult r{RequestKind::Load, Outcome::Miss, decompose(p.req.addr, cfg_).index, p.way, p.evicted,
                   p.stall, latency, read_load_data(p.req.addr, p.req.size)};
    retire(p.ticket, std::move(r), now_ + cfg_.hit_latency);
    load_.reset();
    try_issue_stores();
    check_drain();
  }

  void on_store_done(TxId id) {
    auto it = std::find_if(inflight_txs_.begin(), inflight_txs_.end(),
                           [id](const MemoryWriteTx& tx) { return tx.id == id; });
    if (it == inflight_txs_.end()) throw Error(Errc::UnknownTx, "ack for transaction " + std::to_string(id));
    for (std::size_t i = 0; i < kWordBytes; ++i)
      if (it->mask & (1u << i)) mem_.write_byte(it->base + i, it->data[i]);
    inflight_txs_.erase(it);
    wb_.complete(id);
    dispatch(MissEvent::MemStoreDone);
    try_issue_stores();
    check_drain();
  }

  void on_amo_done() {
    const AmoRequest& req = amo_buf_.request();
    const std::uint64_t old = mem_.amo(req.op, req.addr, req.operand);
    amo_buf_.ack(old);
    dispatch(MissEvent::AmoDone);
    PendingAmo& p = *amo_;
    const auto bytes = store_le64(old);
    AccessResult r{RequestKind::Amo, Outcome::AmoDone, decompose(req.addr, cfg_).index, std::nullopt,
                   std::nullopt, p.stall + (p.issued - p.start), now_ - p.issued,
                   {bytes.begin(), bytes.end()}};
    retire(p.ticket, std::move(r), now_);
    amo_.reset();
    try_issue_stores();
  }

  void write_line_to_cache() {
    PendingLoad& p = *load_;
    const Addr line = cfg_.line_base(p.req.addr);
    const DecomposedAddress d = decompose(line, cfg_);
    const std::uint64_t valid = cache_.valid_mask(d.index);
    const VictimChoice v = select_victim(valid, cfg_.num_ways, lfsr_);
    if (v.lfsr_advanced) ++lfsr_advances_;
    if (valid & (std::uint64_t{1} << v.way)) {
      p.evicted = Eviction{cache_.tag_entry(d.index, v.way).tag, v.way};
      ++stats_.evictions;
    }
    std::vector<std::uint8_t> bytes = mem_.read_span(line, cfg_.line_bytes);
    // Buffered stores are newer than memory.
    for (std::uint64_t w = 0; w < cfg_.line_bytes; w += kWordBytes) {
      if (auto f = wb_.forward(line + w, kWordBytes)) {
        for (std::size_t i = 0; i < kWordBytes; ++i)
          if (f->mask & (1u << i)) bytes[w + i] = f->data[i];
      }
    }
    cache_.fill_line(d.index, v.way, d.tag, bytes);
    p.way = v.way;
  }

  std::vector<std::uint8_t> read_load_data(Addr addr, std::size_t size) const {
    const DecomposedAddress d = decompose(addr, cfg_);
    const Lookup lk = cache_.lookup(d.index, d.tag);
    std::vector<std::uint8_t> out = cache_.read_bytes(d.index, *lk.way, d.offset, size);
    if (auto f = wb_.forward(addr, size)) {
      for (std::size_t i = 0; i < size; ++i)
        if (f->mask & (1u << i)) out[i] = f->data[i];
    }
    return out;
  }

  CacheConfig cfg_;
  CacheMemory cache_;
  MainMemory mem_;
  WriteBuffer wb_;
  Mshr mshr_;
  AmoBuffer amo_buf_;
  Lfsr lfsr_;
  MissState fsm_ = MissState::Idle;

  std::uint64_t now_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t next_miss_id_ = 1;
  std::uint64_t lfsr_advances_ = 0;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
  std::vector<MemoryWriteTx> inflight_txs_;
  std::optional<PendingLoad> load_;
  std::optional<PendingAmo> amo_;

  std::vector<std::optional<AccessResult>> results_;
  std::vector<std::uint64_t> retire_;
  Stats stats_;

  bool log_fsm_ = false;
  std::vector<FsmLogEntry> fsm_log_;
  std::vector<StallRecord> stall_log_;
};

struct TraceRun {
  std::vector<AccessResult> results;
  Stats stats;
};

/// Runs a trace in architectural order on a fresh engine and drains the
/// write buffer at the end. Malformed requests abort the run with their
/// 0-based position in the message.
inline TraceRun run_trace(std::span<const CpuRequest> reqs, const CacheConfig& cfg = {},
                          std::uint64_t seed = 1, std::vector<FsmLogEntry>* fsm_log = nullptr) {
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    try {
      validate_request(reqs[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "request " + std::to_string(i) + ": " + e.what());
    }
  }
  Engine eng(cfg, seed);
  eng.set_fsm_logging(fsm_log != nullptr);
  TraceRun out;
  out.results.reserve(reqs.size());
  for (const CpuRequest& r : reqs) out.results.push_back(eng.step(r));
  eng.drain();
  out.stats = eng.stats();
  if (fsm_log) *fsm_log = eng.fsm_log();
  return out;
}

}  // namespace dcsim
