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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "dcsim/dcsim.hpp"
#include "test_support.hpp"

namespace {

using namespace dcsim;
using dcsim::testing::ReferenceCache;

struct Verdict {
  bool pass;
  std::string detail;
};

Verdict example_decomposition() {
  const DecomposedAddress d = decompose(0x0000008000b010, CacheConfig{});
  const bool ok = d.tag == 0x0000008000b && d.index == 0x01 && d.offset == 0x0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "tag=0x%llx index=0x%02llx offset=0x%llx", static_cast<unsigned long long>(d.tag),
                static_cast<unsigned long long>(d.index), static_cast<unsigned long long>(d.offset));
  return {ok, buf};
}

Verdict worked_lookup() {
  const CacheConfig cfg;
  CacheMemory mem(cfg);
  const DecomposedAddress d = decompose(0x0000008000b010, cfg);
  mem.fill_line(d.index, 7, d.tag, std::vector<std::uint8_t>(16, 0));
  const Lookup lk = mem.lookup(1, 0x0000008000b);
  const bool ok = lk.hit() && *lk.way == 7 && bank_select(d.offset) == 0;
  return {ok, "lookup way=" + (lk.hit() ? std::to_string(*lk.way) : std::string("miss")) +
                  " bank=" + std::to_string(bank_select(d.offset))};
}

Verdict geometry() {
  const CacheConfig cfg;
  const bool ok = cfg.total_bytes() == 32768 && cfg.tag_bits() == 52;
  return {ok, std::to_string(cfg.total_bytes()) + " bytes, tag " + std::to_string(cfg.tag_bits()) + " bits"};
}

Verdict policy_properties() {
  std::mt19937_64 rng(0xACCE55);
  const CacheConfig cfg;
  std::uint64_t violations = 0, fills = 0, quiesced_checks = 0, stores = 0;
  for (int trace = 0; trace < 10000; ++trace) {
    const auto pool = dcsim::testing::random_pool(rng, cfg, 2, 12);
    const auto reqs = dcsim::testing::random_trace(rng, cfg, pool, 200);
    Engine eng(cfg, rng());
    for (const CpuRequest& r : reqs) {
      const DecomposedAddress d = decompose(r.addr, cfg);
      const std::uint64_t before = eng.cache().valid_mask(d.index);
      const AccessResult res = eng.step(r);
      if (r.kind == RequestKind::Store) {
        ++stores;
        if (res.evicted || eng.cache().valid_mask(d.index) != before) ++violations;
      } else if (res.outcome == Outcome::Miss && before != 0xFF) {
        ++fills;
        if (*res.way != dcsim::testing::lowest_zero(before, cfg.num_ways) || res.evicted) ++violations;
      }
      if (eng.quiesced()) {
        ++quiesced_checks;
        if (!dcsim::testing::cache_matches_memory(eng, pool.sets)) ++violations;
      }
    }
    eng.drain();
    ++quiesced_checks;
    if (!dcsim::testing::cache_matches_memory(eng, pool.sets)) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(stores) + " stores, " +
                               std::to_string(fills) + " non-full fills, " + std::to_string(quiesced_checks) +
                               " quiesced points"};
}

Verdict oracle_equivalence() {
  std::mt19937_64 rng(0x0AC1E);
  const CacheConfig cfg;
  std::uint64_t mismatches = 0, loads = 0;
  for (int trace = 0; trace < 1000; ++trace) {
    const auto pool = dcsim::testing::random_pool(rng, cfg, 4, 20);
    const auto reqs = dcsim::testing::random_trace(rng, cfg, pool, 10000);
    const std::uint64_t seed = rng();
    Engine eng(cfg, seed);
    ReferenceCache ref(cfg, seed);
    for (const CpuRequest& r : reqs) {
      const AccessResult res = eng.step(r);
      if (r.kind != RequestKind::Load) continue;
      ++loads;
      if ((res.outcome == Outcome::Hit) != ref.load(r.addr)) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over " + std::to_string(loads) + " loads"};
}

Verdict lfsr_period_and_balance() {
  bool ok = true;
  std::string detail;
  for (unsigned w : {4u, 8u}) {
    Lfsr l(w, 1);
    std::set<std::uint64_t> seen{l.state()};
    std::uint64_t period = 0;
    do {
      l.step();
      ++period;
      seen.insert(l.state());
    } while (l.state() != 1 && period <= (1u << w));
    const bool full = period == (1u << w) - 1 && seen.size() == period;
    ok &= full;
    detail += "w" + std::to_string(w) + " period " + std::to_string(period) + "; ";
  }
  Lfsr l(8, 1);
  std::array<unsigned, 8> counts{};
  for (int i = 0; i < 255; ++i) {
    ++counts[l.victim_index()];
    l.step();
  }
  detail += "way counts";
  for (unsigned c : counts) {
    ok &= c == 31 || c == 32;
    detail += " " + std::to_string(c);
  }
  return {ok, detail};
}

Verdict write_buffer_states() {
  std::mt19937_64 rng(0xB0FF);
  const CacheConfig cfg;
  CacheMemory cache(cfg);
  WriteBuffer wb(cfg.write_buffer_capacity, cfg.max_tx);
  std::vector<TxId> open;
  std::uint64_t violations = 0, transitions = 0;
  while (transitions < 100000) {
    const unsigned pick = rng() % 3;
    if (pick == 0) {
      const std::size_t size = std::size_t{1} << (rng() % 4);
      const Addr addr = (rng() % 16) * 8 + (rng() % (8 / size)) * size;
      wb.store(addr, std::vector<std::uint8_t>(size, static_cast<std::uint8_t>(rng())), cache);
    } else if (pick == 1) {
      if (auto tx = wb.issue()) open.push_back(tx->id);
    } else if (!open.empty()) {
      const std::size_t k = rng() % open.size();
      wb.complete(open[k]);
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
    }
    ++transitions;
    for (const WriteBufferEntry& e : wb.entries())
      for (const ByteStatus& s : e.status)
        if (s.valid && !s.dirty && !s.txblock) ++violations;
    if (wb.size() > wb.capacity() || wb.inflight() > wb.max_tx() || wb.check_invariants()) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(transitions) + " transitions"};
}

Verdict fsm_states_and_liveness() {
  std::mt19937_64 rng(0xF5A);
  std::uint64_t violations = 0;
  std::set<MissState> visited;
  const std::set<MissState> named(kAllMissStates.begin(), kAllMissStates.end());

  // Pure transition function under random legal events.
  MissState s = MissState::Idle;
  for (int i = 0; i < 200000; ++i) {
    std::vector<std::pair<MissEvent, Transition>> legal;
    FsmContext ctx{rng() % 3, 2, rng() % 4 == 0};
    for (MissEvent e : kAllMissEvents) {
      try {
        legal.emplace_back(e, fsm_step(s, e, ctx));
      } catch (const Error&) {
      }
    }
    if (legal.empty()) {
      ++violations;
      break;
    }
    s = legal[rng() % legal.size()].second.next;
    if (!named.count(s)) ++violations;
    visited.insert(s);
  }

  // Engine-driven streams: every accepted read miss reaches its fill within
  // a bounded number of miss-unit events.
  const CacheConfig cfg;
  const std::size_t bound = 2 * (cfg.miss_latency + cfg.max_tx) + 1;
  std::size_t worst = 0, misses = 0;
  for (int trace = 0; trace < 300; ++trace) {
    const auto pool = dcsim::testing::random_pool(rng, cfg, 2, 10);
    const auto reqs = dcsim::testing::random_trace(rng, cfg, pool, 300, {0.3, 0.6, 0.05, 0.05});
    Engine eng(cfg, rng());
    eng.set_fsm_logging(true);
    for (const CpuRequest& r : reqs) eng.submit(r);
    eng.drain();
    const auto& log = eng.fsm_log();
    for (std::size_t i = 0; i < log.size(); ++i) {
      if (!named.count(log[i].to)) ++violations;
      visited.insert(log[i].to);
      if (log[i].event != MissEvent::ReadMiss || log[i].to != MissState::LoadWait) continue;
      ++misses;
      std::size_t j = i + 1;
      while (j < log.size() && !(log[j].event == MissEvent::MemLoadDone)) ++j;
      if (j == log.size() || j - i > bound) {
        ++violations;
        continue;
      }
      worst = std::max(worst, j - i);
    }
  }
  if (visited != named) ++violations;
  return {violations == 0, std::to_string(violations) + " violations; " + std::to_string(visited.size()) +
                               " states visited; " + std::to_string(misses) + " misses, worst " +
                               std::to_string(worst) + " events (bound " + std::to_string(bound) + ")"};
}

Verdict covert_channel() {
  std::mt19937_64 rng(0xC0DE);
  const CacheConfig cfg;
  std::uint64_t wrong_bits = 0, bits = 0, wrong_messages = 0;
  for (int m = 0; m < 100; ++m) {
    std::vector<std::uint8_t> msg(1 + rng() % 64);
    for (auto& b : msg) b = rng() & 1;
    const PrimeProbeTrace t = gen_prime_probe_trace(cfg, rng() % cfg.num_sets, msg);
    const auto got = decode_probe(run_trace(t.requests, cfg, rng()).results, t.layout);
    bits += msg.size();
    for (std::size_t i = 0; i < msg.size(); ++i) wrong_bits += got.at(i) != msg[i];
    wrong_messages += got != msg;
  }
  return {wrong_messages == 0, std::to_string(wrong_messages) + " wrong messages, " + std::to_string(wrong_bits) + "/" +
                                   std::to_string(bits) + " wrong bits"};
}

Verdict deterministic_stats() {
  std::mt19937_64 rng(0xDE7);
  const CacheConfig cfg;
  std::uint64_t differing = 0;
  for (int t = 0; t < 20; ++t) {
    const auto pool = dcsim::testing::random_pool(rng, cfg, 3, 12);
    const auto reqs = dcsim::testing::random_trace(rng, cfg, pool, 5000, {0.5, 0.4, 0.05, 0.05});
    const std::uint64_t seed = rng();
    const std::string a = run_trace(reqs, cfg, seed).stats.to_json().dump(2);
    const std::string b = run_trace(reqs, cfg, seed).stats.to_json().dump(2);
    differing += a != b;
  }
  return {differing == 0, std::to_string(differing) + " of 20 traces differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"address decomposition of 0x0000008000b010", example_decomposition},
      {"worked lookup hits way 7 through bank 0", worked_lookup},
      {"default geometry is 32768 bytes with a 52-bit tag", geometry},
      {"write-through, no-write-allocate and victim policy", policy_properties},
      {"hit/miss sequence matches the reference model", oracle_equivalence},
      {"LFSR full period and victim balance", lfsr_period_and_balance},
      {"write-buffer byte states stay reachable", write_buffer_states},
      {"miss-unit states and read-miss liveness", fsm_states_and_liveness},
      {"Prime+Probe messages decode exactly", covert_channel},
      {"JSON stats are byte-identical across runs", deterministic_stats},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s (%.2fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str(), secs);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
