// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
#include "smlc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace smlc {
namespace {

// Central differences inside, one-sided at the ends.
Eigen::VectorXd gradient(const Eigen::VectorXd& y, double dt) {
  const Eigen::Index n = y.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  if (n < 2) return out;
  out(0) = (y(1) - y(0)) / dt;
  out(n - 1) = (y(n - 1) - y(n - 2)) / dt;
  for (Eigen::Index i = 1; i + 1 < n; ++i) out(i) = (y(i + 1) - y(i - 1)) / (2.0 * dt);
  return out;
}

template <typename Fn>
Eigen::VectorXd column(const SimulationTrace& trace, Fn fn) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(trace.records.size()));
  for (std::size_t i = 0; i < trace.records.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = fn(trace.records[i]);
  return out;
}

IdentityStats summarize(std::string label, std::vector<double> errors, std::size_t total,
                        double tol) {
  IdentityStats st;
  st.label = std::move(label);
  st.total = total;
  st.eligible = errors.size();
  st.tol = tol;
  if (errors.empty()) return st;
  std::sort(errors.begin(), errors.end());
  const std::size_t n = errors.size();
  st.median = n % 2 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
  st.p90 = errors[std::min(n - 1, static_cast<std::size_t>(0.9 * double(n)))];
  st.max = errors.back();
  double sum = 0.0;
  std::size_t pass = 0;
  for (double e : errors) {
    sum += e;
    if (e < tol) ++pass;
  }
  st.mean = sum / double(n);
  st.pass_fraction = double(pass) / double(n);
  return st;
}

double relative_error(double lhs, double rhs, double floor) {
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), floor);
}

PlantModel trace_plant(const SimulationTrace& trace) {
  return make_plant(trace.config.plant_name, {trace.config.headway_h, trace.config.disturbance});
}

double epsilon_of(const SimulationTrace& trace) { return trace.config.smlc.epsilon; }

}  // namespace

Eigen::VectorXd lyapunov_learning(const SimulationTrace& trace, double k_star, double alpha_star,
                                  double gamma_alpha) {
  if (!(k_star > 0.0)) throw InvalidParameter("k* must be positive");
  const double k2 = k_star * k_star;
  return column(trace, [&](const TraceRecord& r) {
    const double drift = r.alpha / k2 - alpha_star;
    return r.u_c * r.u_c / (2.0 * k_star) + k2 / (2.0 * gamma_alpha) * drift * drift;
  });
}

Eigen::VectorXd lyapunov_overall(const SimulationTrace& trace, double k_star, double g,
                                 double gamma_k) {
  if (!(g > 0.0)) throw InvalidParameter("g must be positive");
  return column(trace, [&](const TraceRecord& r) {
    const double dk = r.k - k_star;
    return 0.5 * r.s * r.s + g / (2.0 * gamma_k) * dk * dk;
  });
}

IdentityStats check_output_rate_identity(const SimulationTrace& trace, double tol, double floor) {
  const auto& rec = trace.records;
  const double dt = trace.config.dt;
  const double chi = trace.config.smlc.chi;
  std::vector<double> errors;
  for (std::size_t i = 0; i + 1 < rec.size(); ++i) {
    if (rec[i].flags != 0 || rec[i].deadzone) continue;
    const double rate = (rec[i + 1].u_n - rec[i].u_n) / dt;
    const double expected = 2.0 * rec[i].alpha * smoothed_sign(rec[i].s, chi);
    errors.push_back(relative_error(rate, expected, floor));
  }
  if (errors.size() < 10)
    throw InsufficientData("output-rate identity needs at least 10 unclamped samples, got " +
                           std::to_string(errors.size()));
  return summarize("output_rate", std::move(errors), rec.size(), tol);
}

std::vector<IdentityStats> check_premise_identity(const SimulationTrace& trace, double tol,
                                                  double floor) {
  const auto& rec = trace.records;
  const auto& st = trace.states;
  if (st.size() != rec.size())
    throw InsufficientData("premise identity needs a trace recorded with controller states");
  const double dt = trace.config.dt;
  const double chi = trace.config.smlc.chi;

  struct Family {
    const char* name;
    bool second_input;
    bool upper;
  };
  const Family families[] = {{"input1.lower", false, false},
                             {"input1.upper", false, true},
                             {"input2.lower", true, false},
                             {"input2.upper", true, true}};

  std::vector<IdentityStats> out;
  for (const Family& fam : families) {
    const std::size_t sets =
        fam.second_input ? st.front().bank.input2.size() : st.front().bank.input1.size();
    for (std::size_t j = 0; j < sets; ++j) {
      auto N = [&](std::size_t i) {
        const auto& mfs = fam.second_input ? st[i].bank.input2 : st[i].bank.input1;
        const auto& mf = mfs[j];
        const double x = fam.second_input ? rec[i].e_dot : rec[i].e;
        return fam.upper ? (x - mf.upper_center) / mf.upper_sigma
                         : (x - mf.lower_center) / mf.lower_sigma;
      };
      std::vector<double> errors;
      for (std::size_t i = 0; i + 1 < rec.size(); ++i) {
        if (rec[i].flags != 0) continue;
        const double n0 = N(i);
        const double lhs = n0 * (N(i + 1) - n0) / dt;
        const double rhs = rec[i].alpha * smoothed_sign(rec[i].s, chi);
        errors.push_back(relative_error(lhs, rhs, floor));
      }
      out.push_back(summarize(std::string(fam.name) + "[" + std::to_string(j) + "]",
                              std::move(errors), rec.size(), tol));
    }
  }
  if (!out.empty() && out.front().eligible < 10)
    throw InsufficientData("premise identity needs at least 10 unclamped samples");
  return out;
}

StabilityBounds estimate_bounds(const SimulationTrace& trace) {
  StabilityBounds b;
  const auto& rec = trace.records;
  if (rec.empty()) return b;
  const PlantModel plant = trace_plant(trace);
  const double dt = trace.config.dt;
  const double g = plant.g;
  const int n = trace.order_n;

  const Eigen::VectorXd u = column(trace, [](const TraceRecord& r) { return r.u; });
  b.B_u = u.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i + 1 < u.size(); ++i)
    b.B_udot = std::max(b.B_udot, std::abs(u(i + 1) - u(i)) / dt);

  // n-th derivative of the tracking error from the model, e = x_d - x1 - h x2.
  const Eigen::VectorXd xn_dot = column(trace, [&](const TraceRecord& r) {
    return plant.drift(r.x) + g * r.u + r.d;
  });
  const Eigen::VectorXd ref_n = column(trace, [&](const TraceRecord& r) {
    return n >= 3 ? r.ref.dddx : r.ref.ddx;
  });
  Eigen::VectorXd e_n = ref_n - xn_dot;
  if (plant.headway != 0.0) e_n -= plant.headway * gradient(xn_dot, dt);

  const Eigen::VectorXd s = column(trace, [](const TraceRecord& r) { return r.s; });
  b.E_series = gradient(s, dt) - e_n;

  b.b_series.resize(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const auto& r = rec[static_cast<std::size_t>(i)];
    b.b_series(i) = std::abs(ref_n(i)) + std::abs(plant.drift(r.x)) + std::abs(r.d) +
                    g * std::abs(r.u_n) + std::abs(b.E_series(i));
  }
  b.B = b.b_series.maxCoeff();
  b.k_star = rec.back().k;
  b.alpha_star = rec.back().alpha;
  return b;
}

SoftCheck theorem2_check(const SimulationTrace& trace, const StabilityBounds& bounds) {
  SoftCheck out;
  if (trace.records.size() < 2) return out;
  const Eigen::VectorXd V =
      lyapunov_overall(trace, bounds.k_star, trace.g, trace.config.smlc.gamma_k);
  const Eigen::VectorXd dV = gradient(V, trace.config.dt);
  const double eps = epsilon_of(trace);
  if (!(bounds.k_star > 2.0 * bounds.B)) return out;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    if (std::abs(r.s) <= 10.0 * eps || !(r.k * bounds.k_star > std::abs(r.s))) continue;
    ++out.eligible;
    if (dV(static_cast<Eigen::Index>(i)) < 0.0) ++out.decreasing;
  }
  return out;
}

SoftCheck theorem1_check(const SimulationTrace& trace, const StabilityBounds& bounds,
                         double startup_fraction) {
  SoftCheck out;
  if (trace.records.size() < 2) return out;
  const Eigen::VectorXd V = lyapunov_learning(trace, bounds.k_star, bounds.alpha_star,
                                              trace.config.smlc.gamma_alpha);
  const Eigen::VectorXd dV = gradient(V, trace.config.dt);
  const double eps = epsilon_of(trace);
  const double t_start = startup_fraction * trace.records.back().t;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    if (r.t <= t_start) continue;
    if (std::abs(r.s) <= 10.0 * eps || !(r.k * bounds.k_star > std::abs(r.s))) continue;
    ++out.eligible;
    if (dV(static_cast<Eigen::Index>(i)) < 0.0) ++out.decreasing;
  }
  return out;
}

PerformanceMetrics performance_metrics(const SimulationTrace& trace, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction < 1.0))
    throw InvalidParameter("window fraction must lie in (0, 1)");
  PerformanceMetrics m;
  m.window_fraction = window_fraction;
  const auto& rec = trace.records;
  if (rec.empty()) return m;

  const double t_end = rec.back().t;
  const double t_from = t_end - window_fraction * t_end;
  std::size_t count = 0;
  for (const auto& r : rec) {
    m.max_abs_error = std::max(m.max_abs_error, std::abs(r.e));
    if (r.t + 1e-12 < t_from) continue;
    ++count;
    m.steady_state_error += std::abs(r.e);
    m.mean_abs_uc += std::abs(r.u_c);
    m.mean_abs_u += std::abs(r.u);
    m.mean_abs_xd += std::abs(r.ref.x);
    m.mean_abs_spacing += std::abs(r.ref.x - r.x(0));
  }
  const double c = double(std::max<std::size_t>(count, 1));
  m.steady_state_error /= c;
  m.mean_abs_uc /= c;
  m.mean_abs_u /= c;
  m.mean_abs_xd /= c;
  m.mean_abs_spacing /= c;

  // Earliest time after which |u_c| stays under 5% of the trailing mean |u|.
  const double threshold = 0.05 * m.mean_abs_u;
  std::size_t last_above = rec.size();
  for (std::size_t i = rec.size(); i-- > 0;) {
    if (std::abs(rec[i].u_c) >= threshold && std::abs(rec[i].u_c) > 0.0) {
      last_above = i;
      break;
    }
  }
  if (last_above == rec.size())
    m.uc_decay_time = rec.front().t;
  else
    m.uc_decay_time = last_above + 1 < rec.size() ? rec[last_above + 1].t : t_end;
  return m;
}

std::size_t monotonicity_violations(const SimulationTrace& trace) {
  std::size_t bad = 0;
  const auto& rec = trace.records;
  for (std::size_t i = 0; i + 1 < rec.size(); ++i) {
    const auto& a = rec[i];
    const auto& b = rec[i + 1];
    if (b.k < a.k || b.alpha < a.alpha) ++bad;
    else if (a.deadzone && (b.k != a.k || b.alpha != a.alpha)) ++bad;
  }
  return bad;
}

std::optional<std::size_t> normalization_violations(const SimulationTrace& trace, double tol) {
  std::size_t bad = 0;
  for (const auto& r : trace.records) {
    if (std::isnan(r.lower_norm_sum) || std::isnan(r.upper_norm_sum)) return std::nullopt;
    if (std::abs(r.lower_norm_sum - 1.0) > tol || std::abs(r.upper_norm_sum - 1.0) > tol) ++bad;
  }
  return bad;
}

DiagnosticsReport compute_diagnostics(const SimulationTrace& trace, double window_fraction) {
  DiagnosticsReport rep;
  rep.bounds = estimate_bounds(trace);
  const auto& b = rep.bounds;
  if (!trace.records.empty()) {
    rep.v_learning =
        lyapunov_learning(trace, b.k_star, b.alpha_star, trace.config.smlc.gamma_alpha);
    rep.v_overall = lyapunov_overall(trace, b.k_star, trace.g, trace.config.smlc.gamma_k);
    rep.theorem1_alpha_condition = b.alpha_star > b.B_udot ? 1.0 : 0.0;
    rep.theorem2_gain_condition = b.k_star > 2.0 * b.B ? 1.0 : 0.0;
    std::size_t product = 0;
    for (const auto& r : trace.records)
      if (r.k * b.k_star > std::abs(r.s)) ++product;
    rep.theorem2_product_condition = double(product) / double(trace.records.size());
  }
  rep.theorem1 = theorem1_check(trace, b);
  rep.theorem2 = theorem2_check(trace, b);
  try {
    rep.output_rate = check_output_rate_identity(trace);
  } catch (const InsufficientData&) {
  }
  if (!trace.states.empty()) {
    try {
      rep.premise = check_premise_identity(trace);
    } catch (const InsufficientData&) {
    }
  }
  rep.metrics = performance_metrics(trace, window_fraction);
  rep.monotonicity_violations = monotonicity_violations(trace);
  rep.normalization_violations = normalization_violations(trace);
  return rep;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_identity(std::ostream& os, const std::string& key, const IdentityStats& st) {
  os << key << ".eligible: " << st.eligible << " of " << st.total << "\n";
  os << key << ".median: " << num(st.median) << "\n";
  os << key << ".mean: " << num(st.mean) << "\n";
  os << key << ".p90: " << num(st.p90) << "\n";
  os << key << ".max: " << num(st.max) << "\n";
  os << key << ".pass_fraction: " << num(st.pass_fraction) << " (tol " << num(st.tol) << ")\n";
}

void write_series(std::ostream& os, const std::string& key, const Eigen::VectorXd& v) {
  if (v.size() == 0) {
    os << key << ": n/a\n";
    return;
  }
  os << key << ".initial: " << num(v(0)) << "\n";
  os << key << ".final: " << num(v(v.size() - 1)) << "\n";
  os << key << ".min: " << num(v.minCoeff()) << "\n";
  os << key << ".max: " << num(v.maxCoeff()) << "\n";
}

}  // namespace

void write_diagnostics(std::ostream& os, const DiagnosticsReport& r) {
  const auto& b = r.bounds;
  os << "B_u: " << num(b.B_u) << "\n";
  os << "B_udot: " << num(b.B_udot) << "\n";
  os << "B: " << num(b.B) << "\n";
  os << "E_max_abs: " << num(b.E_series.size() ? b.E_series.cwiseAbs().maxCoeff() : 0.0) << "\n";
  os << "k_star: " << num(b.k_star) << "\n";
  os << "alpha_star: " << num(b.alpha_star) << "\n";
  os << "theorem1.alpha_star_gt_B_udot: " << num(r.theorem1_alpha_condition) << "\n";
  os << "theorem2.k_star_gt_2B: " << num(r.theorem2_gain_condition) << "\n";
  os << "theorem2.k_kstar_gt_abs_s_rate: " << num(r.theorem2_product_condition) << "\n";
  for (const auto& [key, chk] : {std::pair{"theorem1", &r.theorem1}, {"theorem2", &r.theorem2}}) {
    os << key << ".vdot_negative_rate: " << (chk->vacuous() ? std::string("n/a") : num(chk->rate()))
       << " (" << chk->decreasing << " of " << chk->eligible << ")\n";
  }
  if (r.output_rate)
    write_identity(os, "identity.output_rate", *r.output_rate);
  else
    os << "identity.output_rate: n/a\n";
  if (r.premise.empty()) os << "identity.premise: n/a\n";
  for (const auto& p : r.premise) write_identity(os, "identity.premise." + p.label, p);
  write_series(os, "lyapunov.learning", r.v_learning);
  write_series(os, "lyapunov.overall", r.v_overall);
  const auto& m = r.metrics;
  os << "metrics.window_fraction: " << num(m.window_fraction) << "\n";
  os << "metrics.steady_state_abs_error: " << num(m.steady_state_error) << "\n";
  os << "metrics.max_abs_error: " << num(m.max_abs_error) << "\n";
  os << "metrics.uc_decay_time: " << num(m.uc_decay_time) << "\n";
  os << "metrics.mean_abs_uc: " << num(m.mean_abs_uc) << "\n";
  os << "metrics.mean_abs_u: " << num(m.mean_abs_u) << "\n";
  os << "metrics.mean_abs_xd: " << num(m.mean_abs_xd) << "\n";
  os << "monotonicity_violations: " << r.monotonicity_violations << "\n";
  if (r.normalization_violations)
    os << "normalization_violations: " << *r.normalization_violations << "\n";
  else
    os << "normalization_violations: n/a\n";
}

}  // namespace smlc
