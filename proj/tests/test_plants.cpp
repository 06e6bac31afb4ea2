#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "smlc/errors.hpp"
#include "smlc/plants.hpp"

using namespace smlc;

TEST_CASE("acc dynamics") {
  const AccParams p;
  CHECK(acc_dynamics(Eigen::Vector3d::Zero(), 0.0, 0.0, p).isZero());
  CHECK(acc_dynamics(Eigen::Vector3d::Zero(), 0.9, 0.0, p)(2) == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d x(u(rng), u(rng), u(rng));
    const double d = u(rng), uu = u(rng);
    const auto with = acc_dynamics(x, uu, d, p);
    const auto without = acc_dynamics(x, uu, 0.0, p);
    CHECK(with(2) - without(2) == doctest::Approx(d).epsilon(1e-12));
    CHECK(with(0) == x(1));
    CHECK(with(1) == x(2));
  }
}

TEST_CASE("acc control coefficient matches a finite difference") {
  const AccParams p;
  const Eigen::Vector3d x(3.0, 1.2, -0.4);
  const double h = 1e-3;
  const double fd = (acc_dynamics(x, 0.5 + h, 0.2, p)(2) - acc_dynamics(x, 0.5 - h, 0.2, p)(2)) / (2 * h);
  CHECK(std::abs(fd - p.control_gain()) < 1e-10);
  CHECK(make_plant("acc").g == doctest::Approx(1.0 / 0.9));
}

TEST_CASE("spacing error") {
  const Eigen::Vector2d x(8.0, 2.0);
  CHECK(spacing_error(10.0, x, 0.5) == 1.0);
  CHECK(spacing_error(8.0 + 0.5 * 2.0, x, 0.5) == 0.0);
  CHECK(spacing_error(10.0, x, 0.0) == 2.0);
}

TEST_CASE("reference trajectory") {
  auto r = reference(10.0);
  CHECK(r.x == 10.0);
  CHECK(r.dx == 1.0);
  CHECK(r.ddx == 0.0);

  r = reference(30.0);
  CHECK(r.x == doctest::Approx(32.5).epsilon(1e-15));
  CHECK(r.dx == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(r.ddx == 0.05);

  CHECK(reference(20.0).x == 20.0);
  CHECK(reference(std::nextafter(20.0, 0.0)).x == doctest::Approx(20.0));
  CHECK(reference(50.0).dx == 2.0);
  CHECK(reference(50.0).ddx == 0.0);
  CHECK_THROWS_AS(reference(-0.1), DomainError);
}

TEST_CASE("reference is continuous with matching slopes at the breakpoints") {
  for (double tb : {20.0, 40.0}) {
    const double h = 1e-9;
    const auto left = reference(tb - h), right = reference(tb);
    CHECK(std::abs(left.x - right.x) < 1e-7);
    CHECK(std::abs(left.dx - right.dx) < 1e-7);
    // slope from the positions agrees with the analytic one on both sides
    const double hs = 1e-5;
    CHECK((reference(tb).x - reference(tb - hs).x) / hs == doctest::Approx(right.dx).epsilon(1e-4));
    CHECK((reference(tb + hs).x - reference(tb).x) / hs == doctest::Approx(right.dx).epsilon(1e-4));
  }
  CHECK(reference(20.0 - 1e-9).dx == doctest::Approx(1.0));
  CHECK(reference(40.0).dx == doctest::Approx(2.0));
}

TEST_CASE("disturbance") {
  CHECK(disturbance(0.0) == 1.0);
  CHECK(disturbance(std::numbers::pi / 2) == 1.25);
  for (double t = 0.0; t < 100.0; t += 0.37) {
    CHECK(disturbance(t) >= 0.75);
    CHECK(disturbance(t) <= 1.25);
  }
}

TEST_CASE("numeric plant") {
  CHECK(numeric_plant(Eigen::Vector2d::Zero(), -1.0).isZero());
  const auto d = numeric_plant(Eigen::Vector2d(1.0, -1.0), 0.0);
  CHECK(d(0) == -1.0);
  CHECK(d(1) == doctest::Approx(1.7182818284590452).epsilon(1e-15));
  const Eigen::Vector2d x(0.3, 0.8);
  CHECK(numeric_plant(x, 2.5)(1) - numeric_plant(x, 0.0)(1) == doctest::Approx(2.5));

  const auto p = make_plant("numeric2");
  CHECK(p.g == 1.0);
  CHECK(p.drift(Eigen::Vector2d(0.3, 0.8)) == doctest::Approx(numeric_plant(x, 0.0)(1)));
  CHECK(p.disturbance_at(1.0) == 0.0);
}

TEST_CASE("registry") {
  CHECK(plant_names().size() == 2);
  const auto acc = make_plant("acc", {0.5, true});
  CHECK(acc.state_dim == 3);
  CHECK(acc.order_n == 3);
  CHECK(acc.disturbance_at(0.0) == 1.0);
  const auto [e, ed] = acc.error(10.0, Eigen::Vector3d(8.0, 0.5, 0.2));
  CHECK(e == doctest::Approx(10.0 - 8.0 - 0.25));
  CHECK(ed == doctest::Approx(1.0 - 0.5 - 0.1));
  const auto [e2, ed2] = make_plant("numeric2").error(3.0, Eigen::Vector2d(1.0, -1.0));
  CHECK(e2 == -1.0);
  CHECK(ed2 == 1.0);
  CHECK_THROWS_AS(make_plant("boat"), InvalidParameter);
}
