#include <cmath>
#include <numbers>

#include "doctest.h"
#include "specgap/errors.hpp"
#include "specgap/quadrature.hpp"

using specgap::integrate;

TEST_CASE("smooth integrands against antiderivatives") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12, 200).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(x); }, -1.0, 2.0, 1e-12, 200).value ==
        doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-12));
  CHECK(integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, 1e-13, 200).value ==
        doctest::Approx(std::numbers::pi / 4).epsilon(1e-13));
}

TEST_CASE("endpoint singularities converge adaptively") {
  const auto r = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10, 400);
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(r.subdivisions > 0);
  const auto l = integrate([](double x) { return std::log(x); }, 0.0, 1.0, 1e-9, 400);
  CHECK(l.value == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("reversed limits flip the sign and empty intervals vanish") {
  auto f = [](double x) { return x * x; };
  CHECK(integrate(f, 2.0, 0.0, 1e-12, 50).value == doctest::Approx(-8.0 / 3.0));
  CHECK(integrate(f, 1.0, 1.0, 1e-12, 50).value == 0.0);
}

TEST_CASE("error estimate bounds the true error") {
  const double exact = 1.0 - std::cos(10.0);
  const auto r = integrate([](double x) { return std::sin(x); }, 0.0, 10.0, 1e-6, 200);
  CHECK(std::abs(r.value - exact) <= r.error + 1e-15);
}

TEST_CASE("exhausting the subdivision budget raises ConvergenceError") {
  auto wild = [](double x) { return std::sin(1.0 / x) / x; };
  CHECK_THROWS_AS(integrate(wild, 1e-4, 1.0, 1e-12, 3), specgap::ConvergenceError);
  try {
    integrate(wild, 1e-4, 1.0, 1e-12, 3);
  } catch (const specgap::ConvergenceError& e) {
    CHECK(std::string(e.what()).find("worst panel") != std::string::npos);
    CHECK(std::isfinite(e.best_estimate()));
  }
}
