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
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dcsim/covert_channel.hpp"
#include "dcsim/engine.hpp"
#include "dcsim/geometry.hpp"
#include "dcsim/main_memory.hpp"
#include "dcsim/trace.hpp"

namespace dcsim {

inline std::string format_result(std::size_t i, const AccessResult& r) {
  std::ostringstream os;
  os << i << ' ' << to_string(r.kind) << ' ' << to_string(r.outcome) << " set=" << r.set;
  os << " way=";
  if (r.way) os << *r.way;
  else os << '-';
  if (r.evicted) os << " evicted=" << std::hex << r.evicted->tag << std::dec << '@' << r.evicted->way;
  os << " lat=" << r.latency_cycles << " stall=" << r.stall_cycles;
  if (!r.data.empty()) {
    os << " data=";
    char b[3];
    for (auto x : r.data) {
      std::snprintf(b, sizeof b, "%02x", x);
      os << b;
    }
  }
  return os.str();
}

/// Entry point of the `dcsim` tool. Exit codes: 0 success, 1 input error
/// (trace, config, preload), 2 usage error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trace-driven simulator of the CVA6 L1 data cache"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 1;
  std::string stats_format = "text";
  bool log_fsm = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value cache configuration file");
    sub->add_option("--seed", seed, "LFSR seed");
    sub->add_option("--stats", stats_format, "statistics format")->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--log-fsm", log_fsm, "log every miss-unit transition to stderr");
  };

  std::string trace_path;
  std::string preload_path;
  std::string dump_path;
  bool show_results = false;
  CLI::App* run = app.add_subcommand("run", "simulate a trace file");
  run->add_option("--trace", trace_path, "trace file")->required();
  run->add_option("--preload", preload_path, "memory preload file (addr: hexbytes)");
  run->add_option("--dump-tags", dump_path, "write the final tag array to this file");
  run->add_flag("--results", show_results, "print one line per request");
  add_common(run);

  std::uint64_t target_set = 0;
  std::string message;
  CLI::App* pp = app.add_subcommand("primeprobe", "send a message over a Prime+Probe set-contention channel");
  pp->add_option("--set", target_set, "target cache set")->required();
  pp->add_option("--message", message, "bits to send, e.g. 1011")->required();
  add_common(pp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  auto emit_stats = [&](const Stats& s) {
    if (stats_format == "json") out << s.to_json().dump(2) << '\n';
    else out << s.to_text();
  };

  try {
    const CacheConfig cfg = config_path.empty() ? CacheConfig{} : load_config(config_path);

    if (run->parsed()) {
      const std::vector<CpuRequest> reqs = load_trace_file(trace_path);
      Engine eng(cfg, seed);
      eng.set_fsm_logging(log_fsm);
      if (!preload_path.empty()) load_preload_file(eng.memory(), preload_path);
      for (std::size_t i = 0; i < reqs.size(); ++i) {
        const AccessResult r = eng.step(reqs[i]);
        if (show_results) out << format_result(i, r) << '\n';
      }
      eng.drain();
      if (log_fsm) err << format_fsm_log(eng.fsm_log());
      if (!dump_path.empty()) {
        std::ofstream dump(dump_path);
        if (!dump) throw Error(Errc::Io, "cannot write '" + dump_path + "'");
        dump << eng.cache().dump_tags();
      }
      emit_stats(eng.stats());
      return 0;
    }

    const std::vector<std::uint8_t> bits = parse_bits(message);
    const PrimeProbeTrace trace = gen_prime_probe_trace(cfg, target_set, bits);
    std::vector<FsmLogEntry> log;
    const TraceRun res = run_trace(trace.requests, cfg, seed, log_fsm ? &log : nullptr);
    if (log_fsm) err << format_fsm_log(log);
    out << format_bits(decode_probe(res.results, trace.layout)) << '\n';
    emit_stats(res.stats);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dcsim
