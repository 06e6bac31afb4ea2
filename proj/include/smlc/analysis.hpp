// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Post-hoc checks on a finished trace. Everything here is a pure function
// of the trace, so re-running it gives identical numbers.
#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "smlc/sim.hpp"

namespace smlc {

struct StabilityBounds {
  double B_u = 0.0;
  double B_udot = 0.0;
  double B = 0.0;
  Eigen::VectorXd E_series;
  Eigen::VectorXd b_series;  // per-sample left side of the B inequality
  double k_star = 0.0;
  double alpha_star = 0.0;
};

/// Relative-error distribution of a finite-difference identity.
struct IdentityStats {
  std::string label;
  std::size_t total = 0;
  std::size_t eligible = 0;
  double median = 0.0;
  double mean = 0.0;
  double p90 = 0.0;
  double max = 0.0;
  double tol = 0.0;
  double pass_fraction = 0.0;
};

struct SoftCheck {
  std::size_t eligible = 0;
  std::size_t decreasing = 0;
  double rate() const { return eligible ? double(decreasing) / double(eligible) : 1.0; }
  bool vacuous() const { return eligible == 0; }
};

struct PerformanceMetrics {
  double window_fraction = 0.0;
  double steady_state_error = 0.0;  // mean |e| over the trailing window
  double max_abs_error = 0.0;
  double uc_decay_time = 0.0;
  double mean_abs_uc = 0.0;  // trailing window
  double mean_abs_u = 0.0;   // trailing window
  double mean_abs_xd = 0.0;  // trailing window
  double mean_abs_spacing = 0.0;  // trailing window, |x_d - x1|
};

Eigen::VectorXd lyapunov_learning(const SimulationTrace& trace, double k_star, double alpha_star,
                                  double gamma_alpha);

Eigen::VectorXd lyapunov_overall(const SimulationTrace& trace, double k_star, double g,
                                 double gamma_k);

/// Compares the finite-difference rate of u_n with 2 alpha sgn(s) on steps
/// where no clamp and no dead-zone fired. Throws InsufficientData below ten
/// eligible samples.
IdentityStats check_output_rate_identity(const SimulationTrace& trace, double tol = 0.05,
                                         double floor = 1e-9);

/// N dN/dt against alpha sgn(s) for every membership half, N = (x - c)/sigma.
/// Needs a trace recorded with controller states. One entry per
/// (input, lower/upper, set) combination.
std::vector<IdentityStats> check_premise_identity(const SimulationTrace& trace, double tol = 0.01,
                                                  double floor = 1e-9);

StabilityBounds estimate_bounds(const SimulationTrace& trace);

/// dV/dt < 0 rate of the overall function where |s| > 10 eps, k* > 2B and
/// k k* > |s|.
SoftCheck theorem2_check(const SimulationTrace& trace, const StabilityBounds& bounds);

/// dV/dt < 0 rate of the learning function after the first tenth of the run,
/// where |s| > 10 eps and k k* > |s|.
SoftCheck theorem1_check(const SimulationTrace& trace, const StabilityBounds& bounds,
                         double startup_fraction = 0.1);

PerformanceMetrics performance_metrics(const SimulationTrace& trace, double window_fraction);

/// Steps where k or alpha decreased, or moved during a dead-zone step.
std::size_t monotonicity_violations(const SimulationTrace& trace);

/// Steps whose normalized firing sums are off 1 by more than tol. Traces
/// loaded from CSV carry no sums and report nullopt.
std::optional<std::size_t> normalization_violations(const SimulationTrace& trace,
                                                    double tol = 1e-12);

struct DiagnosticsReport {
  StabilityBounds bounds;
  // Theorem 1: alpha* > B_udot; Theorem 2: k* > 2B and k k* > |s|.
  double theorem1_alpha_condition = 0.0;
  double theorem2_gain_condition = 0.0;
  double theorem2_product_condition = 0.0;
  SoftCheck theorem1;
  SoftCheck theorem2;
  std::optional<IdentityStats> output_rate;
  std::vector<IdentityStats> premise;
  Eigen::VectorXd v_learning;
  Eigen::VectorXd v_overall;
  PerformanceMetrics metrics;
  std::size_t monotonicity_violations = 0;
  std::optional<std::size_t> normalization_violations;
};

DiagnosticsReport compute_diagnostics(const SimulationTrace& trace, double window_fraction = 0.25);

void write_diagnostics(std::ostream& os, const DiagnosticsReport& report);

}  // namespace smlc
