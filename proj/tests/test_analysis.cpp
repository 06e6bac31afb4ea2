#include <cmath>

#include <doctest.h>

#include "smlc/analysis.hpp"
#include "smlc/config.hpp"

using namespace smlc;

namespace {

// Synthetic acc trace at rest with no disturbance, dt = 0.01.
SimulationTrace flat_trace(std::size_t n) {
  SimulationTrace tr;
  tr.config = preset("scenario1");
  tr.config.disturbance = false;
  tr.order_n = 3;
  tr.g = 1.0 / 0.9;
  for (std::size_t i = 0; i < n; ++i) {
    TraceRecord r;
    r.t = static_cast<double>(i) * tr.config.dt;
    r.x = r.m = Eigen::Vector3d::Zero();
    r.k = 1.0;
    r.alpha = 3.0;
    tr.records.push_back(r);
  }
  return tr;
}

}  // namespace

TEST_CASE("learning lyapunov function") {
  auto tr = flat_trace(1);
  tr.records[0].u_c = 1.0;
  tr.records[0].alpha = 0.0;
  CHECK(lyapunov_learning(tr, 2.0, 0.0, 0.1)(0) == doctest::Approx(0.25).epsilon(1e-15));

  tr.records[0].u_c = 0.0;
  tr.records[0].alpha = 0.7 * 4.0;
  CHECK(lyapunov_learning(tr, 2.0, 0.7, 0.1)(0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(lyapunov_learning(tr, 0.0, 0.7, 0.1), InvalidParameter);
}

TEST_CASE("overall lyapunov function") {
  auto tr = flat_trace(1);
  tr.records[0].s = 1.0;
  tr.records[0].k = 1.0;
  CHECK(lyapunov_overall(tr, 2.0, 1.0, 1.0)(0) == doctest::Approx(1.0).epsilon(1e-15));
  tr.records[0].s = 0.0;
  tr.records[0].k = 2.0;
  CHECK(lyapunov_overall(tr, 2.0, 1.0, 1.0)(0) == 0.0);
}

TEST_CASE("lyapunov series are non-negative on a real run") {
  ScenarioConfig c = preset("scenario2");
  c.snr_db.reset();
  c.horizon = 5.0;
  const auto tr = run_scenario(c);
  const auto b = estimate_bounds(tr);
  CHECK(lyapunov_learning(tr, b.k_star, b.alpha_star, 0.1).minCoeff() >= 0.0);
  CHECK(lyapunov_overall(tr, b.k_star, 1.0, 1.0).minCoeff() >= 0.0);
}

TEST_CASE("output-rate identity needs data and is exact on a flat segment") {
  auto tr = flat_trace(5);
  CHECK_THROWS_AS(check_output_rate_identity(tr), InsufficientData);
  tr = flat_trace(50);
  for (auto& r : tr.records) r.deadzone = false;  // s = 0 everywhere, u_n constant
  const auto st = check_output_rate_identity(tr);
  CHECK(st.eligible == 49);
  CHECK(st.max == 0.0);
}

TEST_CASE("premise identity needs recorded controller states") {
  CHECK_THROWS_AS(check_premise_identity(flat_trace(50)), InsufficientData);
}

TEST_CASE("bounds of a flat trace are zero") {
  const auto b = estimate_bounds(flat_trace(20));
  CHECK(b.B_u == 0.0);
  CHECK(b.B_udot == 0.0);
  CHECK(b.B == 0.0);
  CHECK(b.E_series.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bounds on scenario 2") {
  ScenarioConfig c = preset("scenario2");
  c.snr_db.reset();
  c.horizon = 3.0;
  const auto tr = run_scenario(c);
  const auto b = estimate_bounds(tr);
  double max_u = 0.0, max_f = 0.0;
  const auto plant = make_plant("numeric2");
  for (const auto& r : tr.records) {
    max_u = std::max(max_u, std::abs(r.u_c + r.u_n));
    max_f = std::max(max_f, std::abs(plant.drift(r.x)));
  }
  CHECK(b.B_u == max_u);
  CHECK(b.B >= max_f);
  // f(x0) = -2 + 1 + e
  CHECK(max_f >= 1.7182818284590452 - 1e-12);
  CHECK(max_f >= 0.28171817154095476);
  CHECK(b.k_star == tr.records.back().k);
  CHECK(b.alpha_star == tr.records.back().alpha);
}

TEST_CASE("performance metrics") {
  auto tr = flat_trace(1001);
  for (auto& r : tr.records) r.u = 1.0;
  auto m = performance_metrics(tr, 0.25);
  CHECK(m.steady_state_error == 0.0);
  CHECK(m.uc_decay_time == 0.0);

  for (auto& r : tr.records) r.u_c = std::exp(-r.t);
  m = performance_metrics(tr, 0.25);
  CHECK(std::abs(m.uc_decay_time - 2.995732273553991) <= 0.01);

  CHECK_THROWS_AS(performance_metrics(tr, 1.0), InvalidParameter);
}

TEST_CASE("monotonicity and normalization counters") {
  auto tr = flat_trace(4);
  CHECK(monotonicity_violations(tr) == 0);
  tr.records[2].k = 0.5;
  CHECK(monotonicity_violations(tr) == 1);
  tr = flat_trace(4);
  tr.records[1].deadzone = true;
  tr.records[2].alpha = 3.5;
  tr.records[3].alpha = 3.5;
  CHECK(monotonicity_violations(tr) == 1);

  CHECK(normalization_violations(tr).value() == 0);
  tr.records[3].lower_norm_sum = 1.0 + 1e-9;
  CHECK(normalization_violations(tr).value() == 1);
  tr.records[0].upper_norm_sum = NAN;
  CHECK_FALSE(normalization_violations(tr).has_value());
}

TEST_CASE("diagnostics are a pure function of the trace") {
  ScenarioConfig c = preset("scenario2");
  c.horizon = 4.0;
  const auto tr = run_scenario(c, {.record_states = true});
  std::ostringstream a, b;
  write_diagnostics(a, compute_diagnostics(tr));
  write_diagnostics(b, compute_diagnostics(tr));
  CHECK(a.str() == b.str());
  CHECK(a.str().find("k_star: ") != std::string::npos);
  CHECK(a.str().find("identity.premise.input2.upper[2].median: ") != std::string::npos);
}
