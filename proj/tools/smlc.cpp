// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
//
// smlc run | verify | sweep
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smlc/analysis.hpp"
#include "smlc/config.hpp"
#include "smlc/trace_io.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kBadConfig = 2, kDiverged = 3 };

void write_outputs(const smlc::SimulationTrace& trace, const fs::path& dir, bool plots) {
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "trace.csv");
    if (!csv) throw smlc::ConfigError("cannot write to '" + dir.string() + "'", 0);
    smlc::write_trace_csv(csv, trace);
  }
  {
    std::ofstream diag(dir / "diagnostics.txt");
    smlc::write_diagnostics(diag, smlc::compute_diagnostics(trace));
  }
  if (plots) {
    std::ofstream gp(dir / "plot.gp");
    smlc::write_plot_script(gp, "trace.csv", static_cast<int>(trace.config.x0.size()));
  }
}

// Runs one config and writes its files. Divergence still leaves the partial
// trace on disk.
int run_one(const smlc::ScenarioConfig& cfg, const fs::path& out, bool plots, std::ostream& log) {
  try {
    const smlc::SimulationTrace trace = smlc::run_scenario(cfg, {.record_states = true});
    write_outputs(trace, out, plots);
    log << "wrote " << trace.records.size() << " records to " << (out / "trace.csv").string()
        << "\n";
    return kOk;
  } catch (const smlc::DivergenceError& ex) {
    if (ex.partial()) {
      fs::create_directories(out);
      std::ofstream csv(out / "trace.csv");
      smlc::write_trace_csv(csv, *ex.partial());
    }
    log << "error: " << ex.what() << "\n";
    return kDiverged;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliding mode learning control simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Simulate a scenario and write trace.csv, diagnostics.txt, plot.gp");
  std::string preset_name, config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> ts, horizon;
  bool emit_plots = false, no_plots = false;
  auto* preset_opt = run->add_option("--preset", preset_name, "scenario1 or scenario2");
  auto* config_opt = run->add_option("--config", config_path, "key = value scenario file");
  preset_opt->excludes(config_opt);
  run->add_option("--seed", seed, "noise seed");
  run->add_option("--ts", ts, "sampling time in seconds");
  run->add_option("--horizon", horizon, "simulated time in seconds");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--emit-plots", emit_plots, "write plot.gp (default)");
  run->add_flag("--no-plots", no_plots, "skip plot.gp");

  auto* verify = app.add_subcommand("verify", "Recompute diagnostics for an existing trace");
  std::string trace_path;
  verify->add_option("--trace", trace_path, "trace.csv written by smlc run")->required();

  auto* sweep = app.add_subcommand("sweep", "Run a config once per value of one key");
  std::string sweep_config, vary;
  std::string sweep_out = "sweep";
  sweep->add_option("--config", sweep_config, "base scenario file")->required();
  sweep->add_option("--vary", vary, "KEY=a,b,c")->required();
  sweep->add_option("--out", sweep_out, "parent directory for the runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      smlc::ScenarioConfig cfg;
      if (*preset_opt)
        cfg = smlc::preset(preset_name);
      else if (*config_opt)
        cfg = smlc::parse_config(config_path);
      else
        throw smlc::ConfigError("run needs --preset or --config", 0);
      if (seed) cfg.seed = *seed;
      if (ts) cfg.dt = *ts;
      if (horizon) cfg.horizon = *horizon;
      (void)emit_plots;
      return run_one(cfg, out_dir, !no_plots, std::cout);
    }

    if (*verify) {
      const smlc::SimulationTrace trace = smlc::read_trace_csv(fs::path(trace_path));
      smlc::write_diagnostics(std::cout, smlc::compute_diagnostics(trace));
      return kOk;
    }

    if (*sweep) {
      const smlc::ScenarioConfig base = smlc::parse_config(sweep_config);
      const auto eq = vary.find('=');
      if (eq == std::string::npos) throw smlc::ConfigError("--vary expects KEY=a,b,c", 0);
      const std::string key = vary.substr(0, eq);
      std::vector<std::string> values;
      std::stringstream ss(vary.substr(eq + 1));
      for (std::string v; std::getline(ss, v, ',');) values.push_back(v);
      if (key == "x0") throw smlc::ConfigError("x0 cannot be swept with a comma list", 0);

      std::vector<smlc::ScenarioConfig> cfgs;
      for (const auto& v : values) {
        smlc::ScenarioConfig c = base;
        smlc::apply_config_value(c, key, v);
        cfgs.push_back(c);
      }
      // Runs share nothing, so they go out in parallel.
      std::vector<std::future<std::pair<int, std::string>>> jobs;
      for (std::size_t i = 0; i < cfgs.size(); ++i) {
        jobs.push_back(std::async(std::launch::async, [&, i] {
          std::ostringstream log;
          const int rc = run_one(cfgs[i], fs::path(sweep_out) / (key + "=" + values[i]), true, log);
          return std::make_pair(rc, log.str());
        }));
      }
      int worst = kOk;
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        auto [rc, msg] = jobs[i].get();
        std::cout << key << "=" << values[i] << ": " << msg;
        worst = std::max(worst, rc);
      }
      return worst;
    }
  } catch (const smlc::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kBadConfig;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kFailure;
  }
  return kOk;
}
