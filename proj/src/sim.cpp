// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
#include "smlc/sim.hpp"

#include <cmath>

namespace smlc {

std::size_t ScenarioConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

void ScenarioConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
  if (!(horizon >= 0.0)) throw InvalidParameter("horizon must be non-negative");
  if (!(k0 > 0.0 && alpha0 > 0.0)) throw InvalidParameter("k0 and alpha0 must be positive");
  if (!(input_range > 0.0)) throw InvalidParameter("input_range must be positive");
  if (!(sigma_floor_ratio > 0.0)) throw InvalidParameter("sigma_floor_ratio must be positive");
  if (!(headway_h >= 0.0)) throw InvalidParameter("headway must be non-negative");
}

Eigen::VectorXd integrate_step(const PlantModel& plant, const Eigen::VectorXd& x, double u, double t,
                               double dt, std::size_t step_index) {
  if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
  const double half = 0.5 * dt;
  const double d0 = plant.disturbance_at(t);
  const double dm = plant.disturbance_at(t + half);
  const double d1 = plant.disturbance_at(t + dt);
  const Eigen::VectorXd k1 = plant.derivative(t, x, u, d0);
  const Eigen::VectorXd k2 = plant.derivative(t + half, x + half * k1, u, dm);
  const Eigen::VectorXd k3 = plant.derivative(t + half, x + half * k2, u, dm);
  const Eigen::VectorXd k4 = plant.derivative(t + dt, x + dt * k3, u, d1);
  Eigen::VectorXd next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) throw DivergenceError("plant state became non-finite", step_index);
  return next;
}

Eigen::VectorXd add_noise(const Eigen::VectorXd& x, double snr_db, const Eigen::VectorXd& signal_rms,
                          std::mt19937_64& rng) {
  if (std::isinf(snr_db) && snr_db > 0) return x;
  if (signal_rms.size() != x.size()) throw InvalidParameter("signal_rms size mismatch");
  if (!(signal_rms.array() > 0.0).all()) throw InvalidParameter("signal_rms must be positive");
  const double scale = std::pow(10.0, -snr_db / 20.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd out = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) += signal_rms(i) * scale * normal(rng);
  return out;
}

ErrorSignals<double> estimate_error_derivatives(int order, double e, double e_dot,
                                                std::optional<double> prev_e_dot, double dt) {
  const double e_ddot = prev_e_dot ? (e_dot - *prev_e_dot) / dt : 0.0;
  return ErrorSignals<double>(order, e, e_dot, e_ddot);
}

SMLCConfig<double> controller_config(const ScenarioConfig& cfg, const PlantModel& plant) {
  SMLCConfig<double> c = cfg.smlc;
  c.n = plant.order_n;
  const int sets = cfg.sets_per_input;
  const double spacing = sets > 1 ? 2.0 * cfg.input_range / (sets - 1) : cfg.input_range;
  c.sigma_floor = cfg.sigma_floor_ratio * spacing;
  c.sigma_step_limit = cfg.sigma_step_limit;
  c.validate();
  return c;
}

namespace {

SimulationTrace simulate(const ScenarioConfig& cfg, const RunOptions& opts,
                         const Eigen::VectorXd* signal_rms) {
  const PlantModel plant = make_plant(cfg.plant_name, {cfg.headway_h, cfg.disturbance});
  if (cfg.x0.size() != plant.state_dim)
    throw InvalidParameter("x0 has " + std::to_string(cfg.x0.size()) + " entries, plant '" +
                           plant.name + "' needs " + std::to_string(plant.state_dim));
  const SMLCConfig<double> ctl = controller_config(cfg, plant);
  const std::size_t steps = cfg.step_count();

  auto trace = std::make_shared<SimulationTrace>();
  trace->config = cfg;
  trace->order_n = plant.order_n;
  trace->g = plant.g;
  trace->records.reserve(steps + 1);
  if (signal_rms) {
    trace->signal_rms = *signal_rms;
    trace->noise_std = *signal_rms * std::pow(10.0, -*cfg.snr_db / 20.0);
  }

  std::mt19937_64 rng(cfg.seed);
  ControllerState<double> state =
      initial_state(cfg.sets_per_input, cfg.sets_per_input, cfg.input_range, cfg.input_range,
                    cfg.k0, cfg.alpha0, cfg.q0);
  Eigen::VectorXd x = cfg.x0;
  std::optional<double> prev_e_dot;

  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * cfg.dt;
    TraceRecord rec;
    rec.t = t;
    rec.x = x;
    rec.m = signal_rms ? add_noise(x, *cfg.snr_db, *signal_rms, rng) : x;
    rec.ref = plant.reference(t);
    rec.d = plant.disturbance_at(t);

    const auto [e, e_dot] = plant.error(t, rec.m);
    const ErrorSignals<double> err =
        estimate_error_derivatives(plant.order_n, e, e_dot, prev_e_dot, cfg.dt);
    const bool padded = !prev_e_dot.has_value();
    prev_e_dot = e_dot;

    StepResult<double> step;
    try {
      step = control_step(state, err, ctl, cfg.dt);
    } catch (const DegenerateFiring& ex) {
      throw DivergenceError(ex.what(), i, trace);
    }

    rec.e = err.e();
    rec.e_dot = err.e_dot();
    rec.e_ddot = err.e_ddot();
    rec.s = step.s;
    rec.u_c = step.u_c;
    rec.u_n = step.u_n;
    rec.u = step.u;
    rec.k = state.k;
    rec.alpha = state.alpha;
    rec.q = state.cons.q;
    rec.flags = step.flags | (padded ? kDerivativePadding : 0u);
    rec.deadzone = step.deadzone;
    rec.lower_norm_sum = step.firing.lower_normalized.sum();
    rec.upper_norm_sum = step.firing.upper_normalized.sum();
    if (opts.record_states) trace->states.push_back(state);
    trace->records.push_back(std::move(rec));

    if (!std::isfinite(step.u)) throw DivergenceError("control became non-finite", i, trace);
    if (i == steps) break;
    try {
      x = integrate_step(plant, x, step.u, t, cfg.dt, i);
    } catch (const DivergenceError& ex) {
      throw DivergenceError("plant state became non-finite", i, trace);
    }
    state = std::move(step.next);
  }
  return std::move(*trace);
}

}  // namespace

SimulationTrace run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  if (!cfg.snr_db) return simulate(cfg, opts, nullptr);

  // Noise is scaled by the RMS of a noise-free pilot run of the same scenario.
  ScenarioConfig pilot_cfg = cfg;
  pilot_cfg.snr_db.reset();
  const SimulationTrace pilot = simulate(pilot_cfg, {}, nullptr);
  const Eigen::Index dim = cfg.x0.size();
  Eigen::VectorXd rms = Eigen::VectorXd::Zero(dim);
  for (const auto& r : pilot.records) rms += r.x.cwiseAbs2();
  rms = (rms / static_cast<double>(pilot.records.size())).cwiseSqrt();
  return simulate(cfg, opts, &rms);
}

}  // namespace smlc
