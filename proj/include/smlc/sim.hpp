// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "smlc/control.hpp"
#include "smlc/errors.hpp"
#include "smlc/plants.hpp"

namespace smlc {

struct ScenarioConfig {
  std::string plant_name;
  double dt = 0.01;
  double horizon = 20.0;
  Eigen::VectorXd x0;
  // n is filled from the plant at run time.
  SMLCConfig<double> smlc;
  double k0 = 1.0;
  double alpha0 = 1.0;
  double q0 = 0.5;
  double input_range = 1.0;
  std::optional<double> snr_db;  // empty means noise off
  std::uint64_t seed = 1;
  bool disturbance = false;
  double headway_h = 0.0;
  // Width floor as a fraction of the membership spacing.
  double sigma_floor_ratio = 1e-3;
  double sigma_step_limit = 0.5;
  int sets_per_input = 3;

  std::size_t step_count() const;
  void validate() const;
};

struct TraceRecord {
  double t = 0.0;
  Eigen::VectorXd x;  // true state
  Eigen::VectorXd m;  // measured state seen by the controller
  ReferenceSample ref;
  double d = 0.0;
  double e = 0.0, e_dot = 0.0, e_ddot = 0.0, s = 0.0;
  double u_c = 0.0, u_n = 0.0, u = 0.0;
  // Adapted values that produced this step's control.
  double k = 0.0, alpha = 0.0, q = 0.0;
  std::uint32_t flags = 0;
  bool deadzone = false;
  double lower_norm_sum = 1.0, upper_norm_sum = 1.0;
};

struct SimulationTrace {
  ScenarioConfig config;
  int order_n = 0;
  double g = 1.0;
  std::vector<TraceRecord> records;
  // Pre-step controller parameters, only when requested.
  std::vector<ControllerState<double>> states;
  Eigen::VectorXd signal_rms;  // pilot-run RMS per component (noisy runs)
  Eigen::VectorXd noise_std;
};

/// Non-finite plant state or control. Carries whatever was recorded so far
/// when raised from run_scenario.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step,
                  std::shared_ptr<const SimulationTrace> partial = nullptr)
      : Error(what + " at step " + std::to_string(step)), step_(step), partial_(std::move(partial)) {}
  std::size_t step() const noexcept { return step_; }
  const SimulationTrace* partial() const noexcept { return partial_.get(); }

 private:
  std::size_t step_;
  std::shared_ptr<const SimulationTrace> partial_;
};

/// Classical RK4 over one period; u is held, d is sampled at each stage.
Eigen::VectorXd integrate_step(const PlantModel& plant, const Eigen::VectorXd& x, double u, double t,
                               double dt, std::size_t step_index = 0);

/// Adds N(0, rms / 10^(snr/20)) per component. An infinite snr leaves x as is.
Eigen::VectorXd add_noise(const Eigen::VectorXd& x, double snr_db, const Eigen::VectorXd& signal_rms,
                          std::mt19937_64& rng);

/// e_ddot is a backward difference of e_dot; without a previous sample it is
/// zero-padded.
ErrorSignals<double> estimate_error_derivatives(int order, double e, double e_dot,
                                                std::optional<double> prev_e_dot, double dt);

SMLCConfig<double> controller_config(const ScenarioConfig& cfg, const PlantModel& plant);

struct RunOptions {
  bool record_states = false;
};

SimulationTrace run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

}  // namespace smlc
