#include "dgtm/timeint.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

using namespace dgtm;

namespace {

double step_scalar(double y0, double t, double dt, const std::function<double(double, double)>& f) {
  std::vector<double> q = {y0}, res(1), k(1);
  rk_step(
      q, res, k, [&](const std::vector<double>& y, double tt, std::vector<double>& out) { out[0] = f(y[0], tt); },
      t, dt, lsrk45());
  return q[0];
}

double dt_for(int cells, int N, double cfl = 1.0) {
  const Mesh m = generate_rect_mesh(cells, cells);
  return estimate_dt(build_geometry(m), build_reference_element(N), cfl);
}

}  // namespace

TEST_CASE("scheme shape") {
  const RKScheme& s = lsrk45();
  CHECK(s.stages == 5);
  CHECK(s.a[0] == 0.0);
  CHECK(s.c[0] == 0.0);
  REQUIRE(s.a.size() == 5);
  REQUIRE(s.b.size() == 5);
  REQUIRE(s.c.size() == 5);
}

TEST_CASE("zero right-hand side leaves the state unchanged") {
  const LayoutSpec L = make_layout(6, 5);
  FieldSet<double> q(L);
  for (int f = 0; f < 3; ++f) {
    for (int k = 0; k < 5; ++k) {
      for (int n = 0; n < 6; ++n) q.at(static_cast<Field>(f), k, n) = 0.1 * (f + 1) * k - n;
    }
  }
  const FieldSet<double> before = q;
  LowStorageRK<FieldSet<double>> rk(q);
  for (int s = 0; s < 3; ++s) {
    rk.step(
        q, [](const FieldSet<double>&, double, FieldSet<double>& out) { out.set_zero(); }, 0.0, 0.3);
  }
  CHECK(q.data == before.data);
}

TEST_CASE("linear decay, one step") {
  const double y = step_scalar(1.0, 0.0, 0.1, [](double v, double) { return -v; });
  CHECK(std::abs(y - std::exp(-0.1)) < 1e-7);
}

TEST_CASE("quartic in time is integrated exactly") {
  // p(t) = 1 + 2t - t^2 + 0.5 t^3 - 3 t^4
  auto p = [](double t) { return 1 + 2 * t - t * t + 0.5 * t * t * t - 3 * t * t * t * t; };
  auto dp = [](double t) { return 2 - 2 * t + 1.5 * t * t - 12 * t * t * t; };
  for (double t0 : {0.0, 0.4, -1.3}) {
    for (double dt : {0.05, 0.3, 1.0}) {
      const double y = step_scalar(p(t0), t0, dt, [&](double, double t) { return dp(t); });
      CHECK(std::abs(y - p(t0 + dt)) < 1e-13 * std::max(1.0, std::abs(p(t0 + dt))));
    }
  }
}

TEST_CASE("fourth-order error decay on y' = -y + cos t") {
  // y(t) = (sin t + cos t)/2 + C e^{-t} with y(0) = 1  ->  C = 1/2
  auto exact = [](double t) { return 0.5 * (std::sin(t) + std::cos(t)) + 0.5 * std::exp(-t); };
  auto err = [&](int n) {
    const double dt = 2.0 / n;
    double y = 1.0;
    for (int i = 0; i < n; ++i) {
      y = step_scalar(y, i * dt, dt, [](double v, double t) { return -v + std::cos(t); });
    }
    return std::abs(y - exact(2.0));
  };
  const double e1 = err(10), e2 = err(20), e3 = err(40);
  CHECK(std::log2(e1 / e2) > 3.7);
  CHECK(std::log2(e2 / e3) > 3.7);
}

TEST_CASE("divergence and bad steps") {
  std::vector<double> q = {1.0}, res(1), k(1);
  auto blowup = [](const std::vector<double>&, double, std::vector<double>& out) {
    out[0] = std::numeric_limits<double>::infinity();
  };
  try {
    rk_step(q, res, k, blowup, 0.0, 0.1, lsrk45(), 17);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step() == 17);
    CHECK(std::string(e.what()).find("17") != std::string::npos);
  }
  auto zero = [](const std::vector<double>&, double, std::vector<double>& out) { out[0] = 0; };
  CHECK_THROWS_AS(rk_step(q, res, k, zero, 0.0, 0.0, lsrk45()), std::invalid_argument);
  CHECK_THROWS_AS(rk_step(q, res, k, zero, 0.0, -1.0, lsrk45()), std::invalid_argument);
}

TEST_CASE("estimate_dt") {
  CHECK(dt_for(8, 3) == doctest::Approx(2.0 * dt_for(16, 3)).epsilon(1e-12));
  CHECK(dt_for(4, 1) == doctest::Approx(2.0 * dt_for(8, 1)).epsilon(1e-12));
  for (int N = 1; N < 10; ++N) CHECK(dt_for(4, N + 1) < dt_for(4, N));
  CHECK(dt_for(8, 4, 0.5) == doctest::Approx(0.5 * dt_for(8, 4)).epsilon(1e-14));
  // regression anchor: 8x8 unit square, N = 4, cfl = 1
  CHECK(dt_for(8, 4) == doctest::Approx(0.00117851130197758).epsilon(1e-13));
  const Mesh m = generate_rect_mesh(2, 2);
  CHECK_THROWS_AS(estimate_dt(build_geometry(m), build_reference_element(2), 0.0), std::invalid_argument);
}
