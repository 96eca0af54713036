/*
 * Copyright 2026 The realmsim Authors
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


#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "realm/harness/area.hpp"
#include "realm/harness/runner.hpp"
#include "realm/harness/scenario.hpp"
#include "realm/protocol/ordering.hpp"
#include "realm/protocol/trace_format.hpp"

namespace {

using namespace realm;
using harness::MetricsReport;
using platform::System;
using protocol::Channel;
using protocol::Cycle;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += ok ? what : "NOT " + what;
  }
};

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<Outcome()> run;
};

double frac(const MetricsReport& r, const char* who) { return r.manager(who).frac_isolated.value_or(0.0); }

// Latency of the core's reads with the first access (cold pipeline) left out.
Outcome latency_blowup() {
  Outcome o;
  auto cfg = harness::preset("dma_latency");
  auto alone = cfg;
  alone.system.managers.pop_back();
  const auto iso = harness::run_point(alone, std::nullopt, nullptr).report.manager("core");
  const auto reps = harness::run_sweep(cfg);
  const auto& unreg = reps.at(0).manager("core");
  const auto& g1 = reps.at(1).manager("core");
  o.require(iso.steady_read_lat == 11.0 && iso.max_lat == 11, fmt::format("isolated latency {:.2f} == 11", iso.steady_read_lat));
  o.require(unreg.steady_read_lat == 266.0, fmt::format("unregulated steady latency {:.2f} == 266", unreg.steady_read_lat));
  o.require(g1.max_lat <= 13, fmt::format("g=1 max latency {} <= 13", g1.max_lat));
  return o;
}

Outcome fairness_fraction() {
  Outcome o;
  const auto reps = harness::run_sweep(harness::preset("frag_sweep"));
  const double unreg = frac(reps.at(0), "core");
  o.require(unreg <= 0.05, fmt::format("unregulated {:.4f} <= 0.05", unreg));
  const double g1 = frac(reps.at(1), "core");
  o.require(g1 >= 0.60 && g1 <= 0.85, fmt::format("g=1 {:.4f} in [0.60, 0.85]", g1));
  bool mono = true;
  std::string curve;
  for (std::size_t k = 1; k < reps.size(); ++k) {
    curve += fmt::format("{}{:g}:{:.3f}", k > 1 ? " " : "", *reps[k].sweep_value, frac(reps[k], "core"));
    if (k > 1 && frac(reps[k], "core") > frac(reps[k - 1], "core")) mono = false;
  }
  o.require(mono, "non-increasing in g (" + curve + ")");
  return o;
}

Outcome budget_imbalance() {
  Outcome o;
  const auto cfg = harness::preset("budget_sweep");
  const auto reps = harness::run_sweep(cfg);
  double best = 0, even = 0, against = 1;
  for (const auto& r : reps) {
    const double f = frac(r, "core");
    best = std::max(best, f);
    if (*r.sweep_value == 1.0) even = f;
    if (*r.sweep_value < 1.0) against = std::min(against, f);
  }
  o.require(best >= 0.93, fmt::format("best core fraction {:.4f} >= 0.95 - 2pp", best));
  o.require(against < even, fmt::format("favoring DMA {:.4f} < 1:1 level {:.4f}", against, even));
  return o;
}

Outcome period_shape() {
  Outcome o;
  const auto reps = harness::run_sweep(harness::preset("period_sweep"));
  auto at = [&](double p) -> const MetricsReport& {
    return *std::find_if(reps.begin(), reps.end(), [&](const MetricsReport& r) { return *r.sweep_value == p; });
  };
  const double dma_full = frac(at(1600), "dma");
  bool lower = true;
  std::string dma_curve;
  for (const auto& r : reps) {
    dma_curve += fmt::format("{}{:g}:{:.3f}", dma_curve.empty() ? "" : " ", *r.sweep_value, frac(r, "dma"));
    if (*r.sweep_value < 1600 && frac(r, "dma") >= dma_full) lower = false;
  }
  o.require(lower, "DMA lower below 1600 (" + dma_curve + ")");
  const double core200 = frac(at(200), "core");
  const double core50 = frac(at(50), "core");
  o.require(core200 >= 0.91, fmt::format("core@200 {:.4f} >= 0.93 - 2pp", core200));
  o.require(core50 < core200, fmt::format("core@50 {:.4f} < core@200", core50));
  return o;
}

Outcome wcdt() {
  Outcome o;
  const auto stall = harness::fault_scenario(harness::preset("fault_wcdt"));
  o.require(stall.complete && !stall.events.empty(), "stall scenario completes after recovery");
  if (stall.events.empty()) return o;
  const auto& ev = stall.events.front();
  o.require(ev.record.cause == erealm::FaultCause::Timeout && ev.record.cycle == ev.record.stage_start + 300,
            fmt::format("timeout {} cycles into the data stage == 300", ev.record.cycle - ev.record.stage_start));
  const auto reset = stall.reset_latency();
  o.require(reset && *reset >= 1 && *reset <= 2, fmt::format("reset {} cycles after detection", reset.value_or(0)));
  const auto notify = stall.notify_latency();
  o.require(notify && *notify <= 400, fmt::format("fault->notified {} <= 400", notify.value_or(0)));
  for (const char* name : {"fault_wrong_tid", "fault_extra_handshake"}) {
    const auto t = harness::fault_scenario(harness::preset(name));
    const auto d = t.detection_latency();
    o.require(t.complete && d && *d == 0, fmt::format("{} detected +{}", name, d.value_or(999)));
  }
  return o;
}

double sig3(double v) {
  if (v == 0) return 0;
  const double scale = std::pow(10.0, 2 - std::floor(std::log10(std::fabs(v))));
  return std::round(v * scale) / scale;
}

Outcome area_model() {
  Outcome o;
  const auto& ws = harness::area_weights();
  const auto wb = std::find_if(ws.begin(), ws.end(), [](const harness::AreaWeights& w) { return w.block == "Write Buffer"; });
  harness::UnitAreaParams u;
  u.buffer_depth = 4;
  u.data_width = 64;
  const double each = harness::block_area(*wb, harness::param_vector(u)) / 1000;
  o.require(sig3(each) == 67.6 && sig3(3 * each) == 203, fmt::format("write buffer {:.2f} / x3 {:.1f} kGE", each, 3 * each));
  const auto r = harness::area_estimate(harness::hermes_area_params());
  o.require(sig3(r.irealm_ge / 1000) == 330, fmt::format("Hermes iREALM {:.2f} kGE == 330", r.irealm_ge / 1000));
  o.require(sig3(r.erealm_ge / 1000) == 50.0, fmt::format("Hermes eREALM {:.2f} kGE == 50.0", r.erealm_ge / 1000));
  return o;
}

bool verbose = false;

platform::ManagerSpec random_manager(std::string name, std::uint32_t tid0, unsigned txns, unsigned max_len) {
  platform::ManagerSpec m;
  m.name = std::move(name);
  m.kind = platform::ManagerKind::Random;
  m.tid = tid0;
  m.max_outstanding_reads = 4;
  m.max_outstanding_writes = 4;
  m.random.txns = txns;
  m.random.num_tids = 4;
  m.random.max_len = max_len;
  m.random.windows = {{0x0, 0x4000}, {0x100000, 0x4000}};
  return m;
}

platform::SystemSpec random_platform(std::uint64_t seed, unsigned txns, unsigned max_len) {
  platform::SystemSpec s;
  s.seed = seed;
  s.managers = {random_manager("m0", 0, txns, max_len), random_manager("m1", 8, txns, max_len)};
  s.subordinates.push_back({{.name = "spm", .fixed_latency = 5}, 0x0, 0x10000});
  s.subordinates.push_back({{.name = "l2", .fixed_latency = 11, .queue_capacity = 2}, 0x100000, 0x10000});
  return s;
}

std::vector<std::string> link_lines(const System& sys, const std::string& link) {
  std::vector<std::string> out;
  const auto& links = sys.sim().links();
  for (const auto& r : sys.sim().trace())
    if (links.at(r.link).name == link) out.push_back(protocol::format_trace_line(r.cycle, link, r.beat));
  return out;
}

Outcome transparency() {
  Outcome o;
  int identical = 0;
  const int seeds = 10;
  for (int seed = 1; seed <= seeds; ++seed) {
    auto spec = random_platform(static_cast<std::uint64_t>(seed), 48, 32);
    // Enough remap slots for every manager/TID pair; a full table would
    // legitimately back-pressure new IDs.
    spec.erealm.num_slots = 8;
    spec.with_units = false;
    System plain(spec);
    spec.with_units = true;
    System guarded(spec);
    guarded.program(0, {{"erealm0.enable", 1}, {"erealm1.enable", 1}});
    plain.run(500000);
    guarded.run(500000);
    bool same = guarded.erealm(0)->enabled() && guarded.erealm(1)->enabled() && guarded.irealm(0)->bypassed();
    for (const char* l : {"m0", "m1", "s0", "s1"}) same = same && link_lines(plain, l) == link_lines(guarded, l);
    identical += same;
  }
  o.require(identical == seeds, fmt::format("{}/{} seeded traces identical", identical, seeds));

  // Single-beat writes, one at a time, with and without an active unit.
  platform::SystemSpec s;
  platform::ManagerSpec w;
  w.name = "core";
  w.kind = platform::ManagerKind::CoreCopy;
  w.traffic = platform::Traffic::Write;
  w.total_bytes = 512;
  w.max_outstanding_writes = 1;
  w.dst = {0x0, 0x1000};
  s.managers = {w};
  s.subordinates.push_back({{.name = "mem", .fixed_latency = 11}, 0x0, 0x10000});
  System bypassed(s);
  System active(s);
  active.program(0, {{"irealm0.bypass", 0}});
  bypassed.run(100000);
  active.run(100000);
  const auto& a = bypassed.manager(0).completed();
  const auto& b = active.manager(0).completed();
  bool plus_one = !a.empty() && a.size() == b.size();
  for (std::size_t k = 0; plus_one && k < a.size(); ++k) plus_one = b[k].latency() == a[k].latency() + 1;
  o.require(plus_one, fmt::format("active write path +1 cycle on {} writes ({} -> {})", a.size(),
                                  a.empty() ? 0 : a[0].latency(), b.empty() ? 0 : b[0].latency()));
  return o;
}

// One randomized run: random unit programming, optional subordinate fault.
std::string oracle_check(std::uint64_t seed, std::string& setup) {
  std::mt19937_64 rng(seed);
  auto pick = [&](auto... v) {
    const std::uint64_t opts[] = {static_cast<std::uint64_t>(v)...};
    return opts[rng() % sizeof...(v)];
  };
  auto range = [&](std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); };

  auto spec = random_platform(seed, 24, static_cast<unsigned>(pick(4, 16, 32, 64)));
  for (auto& m : spec.managers) {
    m.retry_on_error = true;
    m.random.write_fraction = 0.1 * static_cast<double>(range(0, 10));
  }
  std::optional<std::size_t> faulty;
  platform::FaultInjection::Behavior behavior{};
  if (rng() % 10 < 3) {
    faulty = rng() % spec.subordinates.size();
    platform::FaultInjection f;
    behavior = static_cast<platform::FaultInjection::Behavior>(rng() % 4);
    f.behavior = behavior;
    f.direction = rng() % 2 ? protocol::Direction::Write : protocol::Direction::Read;
    if (behavior == platform::FaultInjection::Behavior::ExtraHandshake) f.direction = protocol::Direction::Write;
    f.after_beats = static_cast<unsigned>(range(1, 3));
    f.nth = static_cast<unsigned>(range(0, 3));
    f.stall_cycles = range(50, 3000);
    spec.subordinates[*faulty].spec.fault = f;
  }
  if (faulty) {
    const auto& f = *spec.subordinates[*faulty].spec.fault;
    setup = fmt::format("fault s{} behavior {} {} nth {} after {}", *faulty, static_cast<int>(f.behavior),
                        protocol::to_string(f.direction), f.nth, f.after_beats);
  }
  System sys(spec);

  harness::RegisterList regs;
  for (std::size_t i = 0; i < spec.managers.size(); ++i) {
    const auto p = System::irealm_prefix(i) + ".";
    if (rng() % 5 == 0) continue;  // stays bypassed
    regs.emplace_back(p + "bypass", 0);
    regs.emplace_back(p + "default_fragment", pick(1, 2, 4, 8, 16, 32, 256));
    regs.emplace_back(p + "write_buffer", rng() % 2);
    const unsigned nregions = static_cast<unsigned>(rng() % 3);
    const protocol::Addr bases[] = {0x0, 0x100000};
    for (unsigned r = 0; r < nregions; ++r) {
      const auto rp = p + "r" + std::to_string(r) + ".";
      const auto frag = pick(1, 4, 16, 256);
      regs.emplace_back(rp + "base", bases[r]);
      regs.emplace_back(rp + "limit", bases[r] + range(1, 4) * 0x1000);
      regs.emplace_back(rp + "fragment", frag);
      regs.emplace_back(rp + "budget", range(std::max<std::uint64_t>(frag, 32), 512));
      regs.emplace_back(rp + "period", range(32, 512));
    }
  }
  for (std::size_t j = 0; j < spec.subordinates.size(); ++j)
    if (faulty == j || rng() % 2) regs.emplace_back(System::erealm_prefix(j) + ".enable", 1);
  for (const auto& [n, v] : regs)
    if (n.find("enable") != std::string::npos || n.find("bypass") != std::string::npos) setup += fmt::format(" {}={}", n, v);
  if (auto err = sys.program(0, regs)) return "programming: " + *err;

  // Beats accepted downstream per region within one budget period.
  struct Window {
    Cycle prev = 0;
    std::uint64_t used = 0;
  };
  std::vector<std::vector<Window>> windows(spec.managers.size());
  std::vector<std::pair<std::uint32_t, std::size_t>> ax_links;
  for (std::uint32_t id = 0; id < sys.sim().links().size(); ++id) {
    const auto& l = sys.sim().link(id);
    for (std::size_t i = 0; i < spec.managers.size(); ++i)
      if (l.name == fmt::format("m{}.xbar", i) && (l.channel == Channel::AR || l.channel == Channel::AW))
        ax_links.emplace_back(id, i);
  }
  std::string budget_error;
  sys.sim().set_cycle_observer([&](Cycle now, const std::deque<sim::Link>& links) {
    for (std::size_t i = 0; i < spec.managers.size(); ++i) {
      const auto* u = sys.irealm(i);
      const auto& t = u->regions();
      windows[i].resize(t.size());
      for (std::size_t r = 0; r < t.regions().size(); ++r) {
        const auto e = u->budget(r).period_elapsed;
        if (e < windows[i][r].prev) windows[i][r].used = 0;
        windows[i][r].prev = e;
      }
    }
    for (const auto& [id, i] : ax_links) {
      const auto& l = links[id];
      if (!l.fired() || sys.irealm(i)->bypassed()) continue;
      const auto& t = sys.irealm(i)->regions();
      const auto& q = *l.payload.request;
      const auto r = t.decode(q.addr);
      if (r >= t.regions().size() || !t.region(r).limited()) continue;
      auto& w = windows[i][r];
      w.used += q.len_beats;
      if (w.used > t.region(r).budget_beats && budget_error.empty())
        budget_error = fmt::format("m{} r{} forwarded {} > budget {} at cycle {}", i, r, w.used,
                                   t.region(r).budget_beats, now);
    }
  });

  harness::InterruptService isr(sys, 100, 0);
  while (!sys.finished() && sys.sim().cycle() < 400000) {
    sys.sim().step();
    isr.after_cycle();
  }
  if (faulty) {
    if (const auto fc = sys.memory(*faulty).fault_cycle()) setup += fmt::format(" injected@{}", *fc);
    for (const auto& f : sys.erealm(*faulty)->faults())
      setup += fmt::format(" {}@{}", erealm::to_string(f.cause), f.cycle);
  }
  if (!sys.finished()) return fmt::format("did not finish in {} cycles", sys.sim().cycle());
  if (!budget_error.empty()) return budget_error;
  if (const auto& sv = sys.sim().stability_violations(); !sv.empty()) {
    const auto& l = sys.sim().link(sv.front().link);
    return fmt::format("handshake stability violation on {} {} at cycle {}", l.name,
                       protocol::to_string(l.channel), sv.front().cycle);
  }

  for (std::size_t i = 0; i < spec.managers.size(); ++i) {
    const auto up = sys.beats(fmt::format("m{}", i));
    const auto down = sys.beats(fmt::format("m{}.xbar", i));
    if (auto v = protocol::check_ordering(up); !v.empty())
      return fmt::format("m{}: {} ordering violations, first: {}", i, v.size(), v.front().detail);
    auto count = [](const auto& beats, Channel c, bool lens) {
      std::uint64_t n = 0;
      for (const auto& b : beats)
        if (b.channel == c) n += lens && b.request ? b.request->len_beats : 1;
      return n;
    };
    if (count(up, Channel::R, false) != count(down, Channel::R, false) ||
        count(up, Channel::W, false) != count(down, Channel::W, false) ||
        count(up, Channel::AR, true) != count(down, Channel::AR, true) ||
        count(up, Channel::AW, true) != count(down, Channel::AW, true))
      return fmt::format("m{}: splitter changed the number of beats", i);
    std::uint64_t r_last = 0;
    for (const auto& b : up) r_last += b.channel == Channel::R && b.is_last;
    if (r_last != count(up, Channel::AR, false) || count(up, Channel::B, false) != count(up, Channel::AW, false))
      return fmt::format("m{}: responses do not match requests one to one", i);
  }
  if (faulty && sys.memory(*faulty).fault_cycle() &&
      behavior != platform::FaultInjection::Behavior::StallFor && sys.erealm(*faulty)->faults().empty())
    return "injected fault went undetected";
  return {};
}

std::string oracle_run(std::uint64_t seed) {
  std::string setup;
  auto err = oracle_check(seed, setup);
  if (!err.empty() && verbose) err += " [" + setup + "]";
  return err;
}

Outcome oracle_suites() {
  Outcome o;
  const int runs = 1000;
  int ok = 0;
  std::string first;
  for (int k = 0; k < runs; ++k) {
    const auto err = oracle_run(0x5eed0000u + static_cast<std::uint64_t>(k));
    if (err.empty()) {
      ++ok;
      continue;
    }
    if (first.empty()) first = fmt::format("run {}: {}", k, err);
    if (verbose) std::printf("  run %d (seed %#llx): %s\n", k, static_cast<unsigned long long>(0x5eed0000u + k), err.c_str());
  }
  o.require(ok == runs, fmt::format("{}/{} randomized runs clean{}", ok, runs, first.empty() ? "" : " (" + first + ")"));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "latency blow-up and recovery", 5, latency_blowup},
      {2, "fairness fraction vs fragmentation", 30, fairness_fraction},
      {3, "budget imbalance", 30, budget_imbalance},
      {4, "period sweep shape", 60, period_shape},
      {5, "worst-case detection time", 5, wcdt},
      {6, "area model", 1, area_model},
      {7, "transparency", 5, transparency},
      {8, "randomized oracle suites", 300, oracle_suites},
  };
  int only = 0;
  for (int a = 1; a < argc; ++a) {
    if (std::strcmp(argv[a], "--only") == 0 && a + 1 < argc) only = std::atoi(argv[++a]);
    if (std::strcmp(argv[a], "--verbose") == 0) verbose = true;
  }
  int failed = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > c.limit_s) o.require(false, fmt::format("within {:g} s", c.limit_s));
    failed += !o.pass;
    std::printf("[%s] criterion %d: %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, dt, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
