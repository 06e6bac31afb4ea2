// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
#include "smlc/plants.hpp"

#include <cmath>

#include "smlc/errors.hpp"

namespace smlc {

double acc_drift(const Eigen::Vector3d& x, const AccParams& p) {
  const double c = p.k_a / p.m;
  return -2.0 * c * x(1) * x(2) - (x(2) + c * x(1) * x(1)) / p.tau;
}

Eigen::Vector3d acc_dynamics(const Eigen::Vector3d& x, double u, double d, const AccParams& p) {
  return {x(1), x(2), acc_drift(x, p) + u / (p.m * p.tau) + d};
}

double spacing_error(double x_d, const Eigen::Ref<const Eigen::VectorXd>& x, double h) {
  return x_d - x(0) - h * x(1);
}

ReferenceSample reference(double t) {
  if (t < 0.0) throw DomainError("reference is undefined for negative time");
  ReferenceSample r;
  if (t < 20.0) {
    r.x = t;
    r.dx = 1.0;
  } else if (t < 40.0) {
    const double a = t - 20.0;
    r.x = t + 0.025 * a * a;
    r.dx = 1.0 + 0.05 * a;
    r.ddx = 0.05;
  } else {
    // The last ramp keeps the quadratic of the middle segment and cancels it.
    const double a = t - 20.0, b = t - 40.0;
    r.x = t + 0.025 * a * a - 0.025 * b * b;
    r.dx = 1.0 + 0.05 * a - 0.05 * b;
  }
  return r;
}

double disturbance(double t) { return 1.0 + 0.25 * std::sin(t); }

Eigen::Vector2d numeric_plant(const Eigen::Vector2d& x, double u) {
  return {x(1), -2.0 * x(0) - x(1) + std::exp(x(0)) + u};
}

std::pair<double, double> PlantModel::error(double t, const Eigen::VectorXd& x) const {
  const ReferenceSample r = reference(t);
  const double e = r.x - x(0) - headway * x(1);
  double e_dot = r.dx - x(1);
  if (headway != 0.0) e_dot -= headway * x(2);
  return {e, e_dot};
}

const std::vector<std::string>& plant_names() {
  static const std::vector<std::string> names{"acc", "numeric2"};
  return names;
}

PlantModel make_plant(const std::string& name, const PlantOptions& opts) {
  PlantModel p;
  p.name = name;
  p.headway = opts.headway;
  p.disturbed = opts.disturbance;
  if (name == "acc") {
    AccParams ap;
    ap.h = opts.headway;
    p.state_dim = 3;
    p.order_n = 3;
    p.g = ap.control_gain();
    p.derivative = [ap](double, const Eigen::VectorXd& x, double u, double d) -> Eigen::VectorXd {
      return acc_dynamics(x.head<3>(), u, d, ap);
    };
    p.drift = [ap](const Eigen::VectorXd& x) { return acc_drift(x.head<3>(), ap); };
    p.reference = [](double t) { return smlc::reference(t); };
  } else if (name == "numeric2") {
    if (opts.headway != 0.0) throw InvalidParameter("headway only applies to the acc plant");
    p.state_dim = 2;
    p.order_n = 2;
    p.g = 1.0;
    p.derivative = [](double, const Eigen::VectorXd& x, double u, double d) -> Eigen::VectorXd {
      Eigen::Vector2d dx = numeric_plant(x.head<2>(), u);
      dx(1) += d;
      return dx;
    };
    p.drift = [](const Eigen::VectorXd& x) { return -2.0 * x(0) - x(1) + std::exp(x(0)); };
    p.reference = [](double t) {
      if (t < 0.0) throw DomainError("reference is undefined for negative time");
      return ReferenceSample{};
    };
  } else {
    throw InvalidParameter("unknown plant '" + name + "'");
  }
  return p;
}

}  // namespace smlc
