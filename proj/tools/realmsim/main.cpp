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


#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "realm/harness/area.hpp"
#include "realm/harness/export.hpp"
#include "realm/harness/runner.hpp"
#include "realm/harness/scenario.hpp"
#include "realm/protocol/trace_format.hpp"

namespace fs = std::filesystem;
using namespace realm;
using namespace realm::harness;

namespace {

constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kTimeout = 2;
constexpr int kSimFault = 3;

constexpr std::string_view kAreaPreset = "area_hermes";

ScenarioConfig resolve(const std::string& what) {
  if (is_preset(what)) return preset(what);
  if (fs::exists(what)) return load_scenario(what);
  throw sim::ConfigError(fmt::format("'{}' is neither a preset nor a scenario file (see list-scenarios)", what));
}

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cycles;
  std::string out;
  bool csv = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Base seed for the traffic generators");
  cmd->add_option("--cycles", c.cycles, "Cycle limit per simulation");
  cmd->add_option("--out", c.out, "Directory for CSV and trace files (default: print CSV to stdout)");
  cmd->add_flag("--csv", c.csv, "Emit per-manager CSV");
}

void apply_common(ScenarioConfig& cfg, const Common& c) {
  if (c.seed) cfg.system.seed = *c.seed;
  if (c.cycles) cfg.max_cycles = *c.cycles;
}

void emit(const Common& c, const std::string& name, const std::string& suffix, const std::string& content) {
  if (c.out.empty()) {
    std::fputs(content.c_str(), stdout);
    return;
  }
  fs::create_directories(c.out);
  const auto path = (fs::path(c.out) / (name + suffix)).string();
  write_file(path, content);
  std::fprintf(stderr, "wrote %s\n", path.c_str());
}

int status_of(const std::vector<MetricsReport>& reps) {
  for (const auto& r : reps)
    if (r.stability_violations) return kSimFault;
  for (const auto& r : reps)
    if (!r.complete) return kTimeout;
  return kOk;
}

int run_area(const std::string& source) {
  const auto params = (source == "hermes" || source == kAreaPreset) ? hermes_area_params() : load_area_params(source);
  std::fputs(format_area(area_estimate(params)).c_str(), stdout);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"realmsim: cycle-level bus regulation and fault-isolation simulator"};
  app.require_subcommand(1);

  Common run_opts;
  std::string run_what;
  std::optional<double> run_value;
  bool run_trace = false;
  auto* run = app.add_subcommand("run", "Run one scenario (preset name or JSON file)");
  run->add_option("scenario", run_what, "Preset or scenario file")->required();
  run->add_option("--value", run_value, "Apply this sweep point instead of the base configuration");
  run->add_flag("--trace", run_trace, "Write the per-cycle handshake trace");
  add_common(run, run_opts);

  Common sweep_opts;
  std::string sweep_what;
  std::vector<double> sweep_values;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Run every point of a scenario's sweep");
  sweep->add_option("scenario", sweep_what, "Preset or scenario file")->required();
  sweep->add_option("--values", sweep_values, "Override the sweep values")->delimiter(',');
  sweep->add_option("--threads", threads, "Parallel simulations (default: hardware threads)");
  add_common(sweep, sweep_opts);

  std::string area_src;
  auto* area = app.add_subcommand("area", "Estimate area in gate equivalents");
  area->add_option("params", area_src, "Parameter file, or 'hermes' for the reference configuration")->required();

  auto* list = app.add_subcommand("list-scenarios", "List the built-in scenario presets");

  std::string dump_what;
  auto* dump = app.add_subcommand("dump", "Print a scenario as JSON (a starting point for custom files)");
  dump->add_option("scenario", dump_what, "Preset or scenario file")->required();

  unsigned doc_managers = 1, doc_subordinates = 1;
  auto* regs = app.add_subcommand("regs", "Print the configuration register map as Markdown");
  regs->add_option("--managers", doc_managers, "Managers (one iREALM unit each)");
  regs->add_option("--subordinates", doc_subordinates, "Subordinates (one eREALM unit each)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& n : preset_names()) {
        const auto c = preset(n);
        std::printf("%-22s %s\n", n.c_str(), c.description.c_str());
      }
      std::printf("%-22s %s\n", std::string(kAreaPreset).c_str(), "area model of the reference SoC configuration");
      return kOk;
    }
    if (*area) return run_area(area_src);
    if (*dump) {
      std::puts(dump_scenario(resolve(dump_what)).c_str());
      return kOk;
    }
    if (*regs) {
      platform::SystemSpec spec;
      for (unsigned i = 0; i < doc_managers; ++i) spec.managers.push_back({.name = fmt::format("m{}", i)});
      for (unsigned j = 0; j < doc_subordinates; ++j)
        spec.subordinates.push_back({{}, protocol::Addr{j} << 20, protocol::Addr{1} << 20});
      platform::System sys(spec);
      std::fputs(sys.registers().markdown().c_str(), stdout);
      return kOk;
    }
    if (*run) {
      if (run_what == kAreaPreset) return run_area(run_what);
      auto cfg = resolve(run_what);
      apply_common(cfg, run_opts);
      const auto base = isolated_baselines(cfg);
      auto out = run_point(cfg, run_value, &base, run_trace);
      std::fputs(format_report(out.report).c_str(), run_opts.csv && run_opts.out.empty() ? stderr : stdout);
      if (run_opts.csv) emit(run_opts, cfg.name, ".csv", to_csv({out.report}));
      if (run_trace) {
        std::string t(protocol::kTraceHeader);
        t += '\n';
        for (const auto& l : out.trace) t += l + '\n';
        emit(run_opts, cfg.name, ".trace.csv", t);
      }
      return status_of({out.report});
    }
    if (*sweep) {
      if (sweep_what == kAreaPreset) return run_area(sweep_what);
      auto cfg = resolve(sweep_what);
      apply_common(cfg, sweep_opts);
      if (!sweep_values.empty()) cfg.sweep.values = sweep_values;
      if (cfg.sweep.axis == SweepAxis::None)
        throw sim::ConfigError(fmt::format("scenario {} has no sweep axis", cfg.name));
      cfg.validate();
      auto reps = run_sweep(cfg, threads);
      for (const auto& r : reps)
        std::fputs(format_report(r).c_str(), sweep_opts.csv && sweep_opts.out.empty() ? stderr : stdout);
      if (sweep_opts.csv) emit(sweep_opts, cfg.name, ".csv", to_csv(reps));
      return status_of(reps);
    }
  } catch (const sim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const sim::SimulationFault& e) {
    std::cerr << "simulation fault: " << e.what() << '\n';
    return kSimFault;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kOk;
}
