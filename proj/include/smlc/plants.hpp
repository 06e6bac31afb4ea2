// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace smlc {

struct AccParams {
  double m = 9.0;     // kg
  double k_a = 0.26;  // drag coefficient
  double tau = 0.1;   // engine lag, s
  double h = 0.0;     // time headway, s

  double control_gain() const { return 1.0 / (m * tau); }
};

/// Reference position and its first three derivatives.
struct ReferenceSample {
  double x = 0.0;
  double dx = 0.0;
  double ddx = 0.0;
  double dddx = 0.0;
};

Eigen::Vector3d acc_dynamics(const Eigen::Vector3d& x, double u, double d, const AccParams& p);

/// Drift term of the ACC jerk equation, i.e. x3_dot with u = d = 0.
double acc_drift(const Eigen::Vector3d& x, const AccParams& p);

double spacing_error(double x_d, const Eigen::Ref<const Eigen::VectorXd>& x, double h);

/// Ramp reference of the cruise scenario. Throws DomainError for t < 0.
ReferenceSample reference(double t);

double disturbance(double t);

Eigen::Vector2d numeric_plant(const Eigen::Vector2d& x, double u);

/// A plant in the canonical form x_n_dot = f(x) + g u + d, plus the tracking
/// error used by the controller, e = x_d - x1 - h x2.
struct PlantModel {
  std::string name;
  int state_dim = 0;
  int order_n = 0;
  double g = 1.0;
  double headway = 0.0;
  bool disturbed = false;

  std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& x, double u, double d)> derivative;
  std::function<double(const Eigen::VectorXd& x)> drift;
  std::function<ReferenceSample(double t)> reference;

  double disturbance_at(double t) const { return disturbed ? smlc::disturbance(t) : 0.0; }

  /// e and e_dot from a (possibly noisy) state.
  std::pair<double, double> error(double t, const Eigen::VectorXd& x) const;
};

struct PlantOptions {
  double headway = 0.0;
  bool disturbance = false;
};

/// Names accepted by make_plant: "acc" and "numeric2".
const std::vector<std::string>& plant_names();

PlantModel make_plant(const std::string& name, const PlantOptions& opts = {});

}  // namespace smlc
