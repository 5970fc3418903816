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
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "dcsim/amo_buffer.hpp"
#include "dcsim/error.hpp"
#include "dcsim/lfsr.hpp"
#include "dcsim/mshr.hpp"

namespace dcsim {

enum class MissState { Idle, Drain, Amo, Flush, StoreWait, LoadWait, AmoWait };

inline constexpr std::array<MissState, 7> kAllMissStates = {
    MissState::Idle,      MissState::Drain,    MissState::Amo,    MissState::Flush,
    MissState::StoreWait, MissState::LoadWait, MissState::AmoWait};

enum class MissEvent {
  ReadMiss,
  StoreIssue,
  FlushReq,
  AmoReq,
  MemLoadDone,
  MemStoreDone,
  AmoDone,
  DrainComplete,
  // Internal follow-ups that close the Amo and Flush states.
  AmoIssue,
  FlushDone,
};

inline constexpr std::array<MissEvent, 10> kAllMissEvents = {
    MissEvent::ReadMiss,     MissEvent::StoreIssue, MissEvent::FlushReq,      MissEvent::AmoReq,
    MissEvent::MemLoadDone,  MissEvent::MemStoreDone, MissEvent::AmoDone,     MissEvent::DrainComplete,
    MissEvent::AmoIssue,     MissEvent::FlushDone};

enum class MissAction {
  IssueMemLoad,
  IssueMemStore,
  WriteLineToCache,
  ClearMshr,
  IssueAmoToMemory,
  InvalidateAll,
  SignalStall,
};

constexpr std::string_view to_string(MissState s) {
  switch (s) {
    case MissState::Idle: return "Idle";
    case MissState::Drain: return "Drain";
    case MissState::Amo: return "Amo";
    case MissState::Flush: return "Flush";
    case MissState::StoreWait: return "StoreWait";
    case MissState::LoadWait: return "LoadWait";
    case MissState::AmoWait: return "AmoWait";
  }
  return "?";
}

constexpr std::string_view to_string(MissEvent e) {
  switch (e) {
    case MissEvent::ReadMiss: return "ReadMiss";
    case MissEvent::StoreIssue: return "StoreIssue";
    case MissEvent::FlushReq: return "FlushReq";
    case MissEvent::AmoReq: return "AmoReq";
    case MissEvent::MemLoadDone: return "MemLoadDone";
    case MissEvent::MemStoreDone: return "MemStoreDone";
    case MissEvent::AmoDone: return "AmoDone";
    case MissEvent::DrainComplete: return "DrainComplete";
    case MissEvent::AmoIssue: return "AmoIssue";
    case MissEvent::FlushDone: return "FlushDone";
  }
  return "?";
}

constexpr std::string_view to_string(MissAction a) {
  switch (a) {
    case MissAction::IssueMemLoad: return "IssueMemLoad";
    case MissAction::IssueMemStore: return "IssueMemStore";
    case MissAction::WriteLineToCache: return "WriteLineToCache";
    case MissAction::ClearMshr: return "ClearMshr";
    case MissAction::IssueAmoToMemory: return "IssueAmoToMemory";
    case MissAction::InvalidateAll: return "InvalidateAll";
    case MissAction::SignalStall: return "SignalStall";
  }
  return "?";
}

/// What the FSM needs to know about the rest of the subsystem.
struct FsmContext {
  // Write transactions outstanding after the one being issued, if any.
  std::size_t inflight_tx = 0;
  std::size_t max_tx = 2;
  // The engine's stall check flagged the read miss being presented.
  bool stalled = false;
};

struct ActionList {
  std::array<MissAction, 3> items{};
  std::size_t count = 0;

  void push(MissAction a) { items[count++] = a; }
  const MissAction* begin() const { return items.data(); }
  const MissAction* end() const { return items.data() + count; }
  std::size_t size() const { return count; }
  bool empty() const { return count == 0; }
  bool contains(MissAction a) const {
    for (MissAction x : *this)
      if (x == a) return true;
    return false;
  }
};

struct Transition {
  MissState next = MissState::Idle;
  ActionList actions;
};

/// Miss-unit transition function. Pure: all effects are returned as actions
/// for the engine to execute. Undefined (state, event) pairs throw
/// IllegalEvent.
inline Transition fsm_step(MissState state, MissEvent event, const FsmContext& ctx = {}) {
  Transition t;
  t.next = state;
  auto illegal = [&]() -> Transition {
    throw Error(Errc::IllegalEvent, std::string(to_string(event)) + " in state " +
                                        std::string(to_string(state)));
  };
  switch (state) {
    case MissState::Idle:
      switch (event) {
        case MissEvent::ReadMiss:
          if (ctx.stalled) {
            t.actions.push(MissAction::SignalStall);
          } else {
            t.next = MissState::LoadWait;
            t.actions.push(MissAction::IssueMemLoad);
          }
          return t;
        case MissEvent::StoreIssue:
          // Inferred: the last free transaction slot parks the unit in
          // StoreWait until an acknowledgement frees one.
          t.next = ctx.inflight_tx >= ctx.max_tx ? MissState::StoreWait : MissState::Idle;
          t.actions.push(MissAction::IssueMemStore);
          return t;
        case MissEvent::FlushReq:
          t.next = MissState::Flush;
          t.actions.push(MissAction::InvalidateAll);
          return t;
        case MissEvent::AmoReq:
          t.next = MissState::Drain;
          return t;
        case MissEvent::MemStoreDone:
          return t;
        default:
          return illegal();
      }
    case MissState::Drain:
      switch (event) {
        case MissEvent::StoreIssue:
          t.actions.push(MissAction::IssueMemStore);
          return t;
        case MissEvent::MemStoreDone:
          return t;
        case MissEvent::MemLoadDone:
          // Inferred: a load accepted before the AMO still completes.
          t.actions.push(MissAction::WriteLineToCache);
          t.actions.push(MissAction::ClearMshr);
          return t;
        case MissEvent::DrainComplete:
          t.next = MissState::Amo;
          return t;
        default:
          return illegal();
      }
    case MissState::Amo:
      if (event != MissEvent::AmoIssue) return illegal();
      t.next = MissState::AmoWait;
      t.actions.push(MissAction::IssueAmoToMemory);
      return t;
    case MissState::AmoWait:
      if (event != MissEvent::AmoDone) return illegal();
      t.next = MissState::Idle;
      return t;
    case MissState::Flush:
      if (event != MissEvent::FlushDone) return illegal();
      t.next = MissState::Idle;
      return t;
    case MissState::StoreWait:
      if (event != MissEvent::MemStoreDone) return illegal();
      t.next = MissState::Idle;
      return t;
    case MissState::LoadWait:
      switch (event) {
        case MissEvent::MemLoadDone:
          t.next = MissState::Idle;
          t.actions.push(MissAction::WriteLineToCache);
          t.actions.push(MissAction::ClearMshr);
          return t;
        case MissEvent::StoreIssue:
          // Inferred: write-through traffic keeps flowing under a load miss.
          t.actions.push(MissAction::IssueMemStore);
          return t;
        case MissEvent::MemStoreDone:
          return t;
        default:
          return illegal();
      }
  }
  return illegal();
}

struct VictimChoice {
  unsigned way = 0;
  bool lfsr_advanced = false;
};

/// Lowest-index invalid way if the set has one; otherwise the LFSR picks the
/// victim and is stepped once.
inline VictimChoice select_victim(std::uint64_t valid_mask, std::uint32_t num_ways, Lfsr& lfsr) {
  const std::uint64_t full = num_ways >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << num_ways) - 1;
  const std::uint64_t invalid = ~valid_mask & full;
  if (invalid != 0) return {static_cast<unsigned>(std::countr_zero(invalid)), false};
  const unsigned way = lfsr.victim_index(num_ways);
  lfsr.step();
  return {way, true};
}

enum class AccessKind { Read, Write };

enum class StallReason { None, WriteCollidesMshr, ReadOverlapsAmo };

constexpr std::string_view to_string(StallReason r) {
  switch (r) {
    case StallReason::None: return "None";
    case StallReason::WriteCollidesMshr: return "WriteCollidesMshr";
    case StallReason::ReadOverlapsAmo: return "ReadOverlapsAmo";
  }
  return "?";
}

/// The two documented hazards: a store hitting the pending read miss, and a
/// read miss overlapping an inflight AMO.
inline StallReason check_stall(AccessKind kind, Addr addr, std::size_t size, const Mshr& mshr,
                               const AmoBuffer& amo, std::uint64_t line_bytes = 16) {
  if (kind == AccessKind::Write)
    return mshr.write_collides(addr, size) ? StallReason::WriteCollidesMshr : StallReason::None;
  return read_overlaps_amo(addr, size, amo, line_bytes) ? StallReason::ReadOverlapsAmo
                                                        : StallReason::None;
}

}  // namespace dcsim
