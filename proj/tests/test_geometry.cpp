#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "specgap/errors.hpp"
#include "specgap/geometry.hpp"

using namespace specgap::geometry;
using std::numbers::pi;

namespace {

// Reference formulas typed from the table of bounds.
double ref_alpha(int d, double D, double K) { return D * std::sqrt(std::abs(K) * (d - 1)) / 2; }
double ref_alpha_prime(int d, double D, double K) {
  return D * std::sqrt(std::abs(K) * std::max(d - 1, 2)) / 2;
}

// Composite Simpson on [a, b] with m (even) panels.
double simpson(const std::function<double(double)>& f, double a, double b, int m = 20000) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int k = 1; k < m; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double ref_b2(int d, double D) {
  auto c = [d](double t) { return std::pow(std::cos(t), d - 1); };
  return d * std::pow(simpson(c, 0, pi / 2) / simpson(c, 0, D / 2), 2.0 / d);
}

double ref_weight(int d, double K, double r) {
  if (d == 1) return 1.0;
  const double x = 0.5 * r * std::sqrt(std::abs(K) / (d - 1));
  return std::pow(K <= 0 ? std::cosh(x) : std::cos(x), d - 1);
}

// inf over an interior grid of 4 f(r) / int_0^r C^{-1}(s) int_s^D C f du ds by
// cumulative trapezoid sums on m cells.
double ref_general(int d, double D, double K, const std::function<double(double)>& f,
                   int m = 200000) {
  const double h = D / m;
  std::vector<double> tail(m + 1, 0.0);
  for (int k = m - 1; k >= 0; --k) {
    const double a = k * h, b = (k + 1) * h;
    tail[k] = tail[k + 1] + 0.5 * h * (ref_weight(d, K, a) * f(a) + ref_weight(d, K, b) * f(b));
  }
  double outer = 0.0, best = INFINITY;
  for (int k = 1; k < m; ++k) {
    const double a = (k - 1) * h, b = k * h;
    outer += 0.5 * h * (tail[k - 1] / ref_weight(d, K, a) + tail[k] / ref_weight(d, K, b));
    if (k > m / 200) best = std::min(best, 4.0 * f(b) / outer);
  }
  return best;
}

GeometryParams P(int d, double D, double K) { return GeometryParams{d, D, K}; }

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_WITH_AS(validate(P(0, 1, 0)), "geometry: dimension must be ≥ 1", specgap::DomainError);
  CHECK_THROWS_AS(validate(P(2, 0.0, 0)), specgap::DomainError);
  CHECK_THROWS_AS(validate(P(2, 1.0, INFINITY)), specgap::DomainError);
  CHECK_NOTHROW(validate(P(1, 1.0, -3.0)));
  CHECK(P(3, 2.0, -2.0).alpha() == doctest::Approx(ref_alpha(3, 2.0, -2.0)));
  CHECK(P(2, 2.0, -2.0).alpha_prime() == doctest::Approx(ref_alpha_prime(2, 2.0, -2.0)));
  QuadratureSpec q;
  q.grid_size = 8;
  CHECK_THROWS_AS(validate(q), specgap::DomainError);
}

TEST_CASE("cosh weight") {
  CHECK(cosh_weight(P(3, 2.0, 0.0), 0.7) == 1.0);
  CHECK(cosh_weight(P(1, 2.0, -4.0), 1.0) == 1.0);
  CHECK(cosh_weight(P(2, 2.0, -1.0), 1.0) == doctest::Approx(1.1276259652063807).epsilon(1e-14));
  CHECK(cosh_weight(P(4, 2.0, 3.0), 1.0) == doctest::Approx(std::pow(std::cos(0.5), 3)));
  CHECK_THROWS_AS(cosh_weight(P(2, 2.0, -1.0), 0.0), specgap::DomainError);
  CHECK_THROWS_AS(cosh_weight(P(2, 2.0, -1.0), 2.0), specgap::DomainError);
  // (D/2) sqrt(K/(d-1)) beyond pi/2: the cosine weight changes sign inside.
  CHECK_THROWS_AS(cosh_weight(P(2, 4.0, 1.0), 1.0), specgap::DomainError);
}

TEST_CASE("classical bounds: worked examples") {
  CHECK(*eval_classical_bound(BoundId::B1, P(2, pi, 1)).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(*eval_classical_bound(BoundId::B4, P(1, pi, 0)).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*eval_classical_bound(BoundId::B5, P(2, 1, 0)).value ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("classical bounds match the reference formulas") {
  for (int d : {2, 3, 5, 8}) {
    for (double D : {0.5, 1.0, 2.5}) {
      for (double K : {-2.0, -0.5, 0.0, 0.3}) {
        CAPTURE(d);
        CAPTURE(D);
        CAPTURE(K);
        const double a = ref_alpha(d, D, K), ap = ref_alpha_prime(d, D, K), b = pi * pi / (D * D);
        auto v = [&](BoundId id) { return eval_classical_bound(id, P(d, D, K)); };
        if (K >= 0) {
          CHECK(*v(BoundId::B1).value == doctest::Approx(d * K / (d - 1)));
          CHECK(*v(BoundId::B3).value == doctest::Approx(b / 2));
          CHECK(*v(BoundId::B4).value == doctest::Approx(b));
        } else {
          CHECK_FALSE(v(BoundId::B1).applicable);
          CHECK_FALSE(v(BoundId::B1).value.has_value());
        }
        if (K <= 0) {
          CHECK(*v(BoundId::B5).value ==
                doctest::Approx(1 / (D * D * (d - 1) * std::exp(1 + std::sqrt(1 + 16 * a * a)))));
          CHECK(*v(BoundId::B6).value == doctest::Approx(std::max(0.0, b + K)));
          CHECK(v(BoundId::B7).applicable == (d >= 5));
          if (d >= 5) CHECK(*v(BoundId::B7).value == doctest::Approx(b * std::exp(-a)));
          CHECK(v(BoundId::B8).applicable == (d <= 4));
          if (d <= 4) CHECK(*v(BoundId::B8).value == doctest::Approx(b / 2 * std::exp(-ap)));
        } else {
          CHECK_FALSE(v(BoundId::B6).applicable);
        }
        CHECK_FALSE(v(BoundId::B2).applicable);  // K != d - 1 here
      }
    }
  }
}

TEST_CASE("B2 against a Simpson reference") {
  for (int d : {2, 3, 4, 7}) {
    for (double D : {1.0, 2.0, 3.0, pi}) {
      CAPTURE(d);
      CAPTURE(D);
      const auto r = eval_classical_bound(BoundId::B2, P(d, D, d - 1));
      REQUIRE(r.applicable);
      CHECK(*r.value == doctest::Approx(ref_b2(d, D)).epsilon(1e-9));
    }
  }
  CHECK_FALSE(eval_classical_bound(BoundId::B2, P(2, 4.0, 1.0)).applicable);
}

TEST_CASE("corollary bounds: worked examples and reference formulas") {
  CHECK(*eval_corollary_bound(BoundId::C9, P(3, pi, 0)).value == doctest::Approx(1.0));
  CHECK(*eval_corollary_bound(BoundId::C10, P(2, pi, 1)).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(*eval_corollary_bound(BoundId::C12, P(2, pi, 0)).value == doctest::Approx(1.0).epsilon(1e-12));

  for (int d : {2, 3, 6}) {
    for (double D : {0.5, 1.0, 2.0}) {
      const double b = pi * pi / (D * D);
      for (double K : {0.1, 0.7}) {
        const double x = D / 2 * std::sqrt(K / (d - 1));
        CHECK(*eval_corollary_bound(BoundId::C9, P(d, D, K)).value ==
              doctest::Approx(b + std::max(pi / (4 * d), 1 - 2 / pi) * K));
        CHECK(*eval_corollary_bound(BoundId::C10, P(d, D, K)).value ==
              doctest::Approx(d * K / (d - 1) / (1 - std::pow(std::cos(x), d))));
      }
      for (double K : {-1.5, -0.2}) {
        CHECK(*eval_corollary_bound(BoundId::C11, P(d, D, K)).value ==
              doctest::Approx(std::max(0.0, b + (pi / 2 - 1) * K)));
        CHECK(*eval_corollary_bound(BoundId::C12, P(d, D, K)).value ==
              doctest::Approx(b * std::sqrt(1 - 2 * D * D * K / std::pow(pi, 4)) *
                              std::pow(std::cosh(D / 2 * std::sqrt(-K / (d - 1))), 1 - d)));
      }
    }
  }
  // K -> 0 continuity of C10 with its limit 8/D^2.
  CHECK(*eval_corollary_bound(BoundId::C10, P(3, 1.5, 1e-7)).value ==
        doctest::Approx(*eval_corollary_bound(BoundId::C10, P(3, 1.5, 0.0)).value).epsilon(1e-6));
  CHECK_FALSE(eval_corollary_bound(BoundId::C10, P(1, 1.0, 0.5)).applicable);
  CHECK_FALSE(eval_corollary_bound(BoundId::C12, P(1, 1.0, -0.5)).applicable);
}

TEST_CASE("unknown ids are rejected") {
  CHECK_THROWS_AS(eval_classical_bound(BoundId::C9, P(2, 1, 0)), specgap::DomainError);
  CHECK_THROWS_AS(eval_corollary_bound(BoundId::B1, P(2, 1, 0)), specgap::DomainError);
  CHECK_THROWS_AS(parse_bound_id("B13"), specgap::DomainError);
  CHECK(parse_bound_id("C11") == BoundId::C11);
  CHECK(to_string(BoundId::GF) == "GF");
}

TEST_CASE("sharpness on the sphere and the circle") {
  for (int d = 2; d <= 6; ++d) {
    const auto p = P(d, pi, d - 1);
    CHECK(*eval_classical_bound(BoundId::B1, p).value == doctest::Approx(d).epsilon(1e-12));
    CHECK(*eval_classical_bound(BoundId::B2, p).value == doctest::Approx(d).epsilon(1e-12));
    CHECK(*eval_corollary_bound(BoundId::C10, p).value == doctest::Approx(d).epsilon(1e-12));
    CHECK(*known_eigenvalue(p) == d);
  }
  const auto c = P(1, pi, 0);
  for (auto id : {BoundId::B4, BoundId::B6}) CHECK(*eval_classical_bound(id, c).value == doctest::Approx(1.0));
  for (auto id : {BoundId::C9, BoundId::C11}) CHECK(*eval_corollary_bound(id, c).value == doctest::Approx(1.0));
  CHECK(*eval_classical_bound(BoundId::B7, P(5, 2.0, 0)).value == doctest::Approx(pi * pi / 4));
  CHECK_FALSE(known_eigenvalue(P(2, 3.0, 1)).has_value());
}

TEST_CASE("soundness: no bound exceeds the exact eigenvalue") {
  std::vector<GeometryParams> oracles{P(1, pi, 0)};
  for (int d = 2; d <= 5; ++d) oracles.push_back(P(d, pi, d - 1));
  for (const auto& p : oracles) {
    const auto table = bounds_table(p);
    for (const auto& row : table.rows) {
      CAPTURE(p.dimension);
      CAPTURE(to_string(row.id));
      CHECK_FALSE(row.error.has_value());
      if (row.value) CHECK(*row.value <= *known_eigenvalue(p) + 1e-6);
    }
  }
}

TEST_CASE("general formula: closed-form cases") {
  // f = sin(beta r), K = 0, d = 1: the ratio is pi^2/D^2 at every r.
  for (double D : {1.0, 2.0, pi, 10.0}) {
    const auto p = P(1, D, 0);
    const auto g = general_lower_bound(p, sine_beta(p));
    CHECK(g.value == doctest::Approx(pi * pi / (D * D)).epsilon(1e-8));
    for (double r : g.ratios) CHECK(r == doctest::Approx(pi * pi / (D * D)).epsilon(1e-8));
  }
  // f = 1: denominator r D - r^2/2, minimum of the ratio 8/D^2 at r = D.
  const auto g1 = general_lower_bound(P(1, 2.0, 0), constant_one());
  CHECK(g1.value == doctest::Approx(2.0).epsilon(1e-5));
  // Sphere S^2 with sin(r/2): between pi^2/D^2 and lambda_1.
  const auto p2 = P(2, pi, 1);
  const auto g2 = general_lower_bound(p2, sine_beta(p2));
  CHECK(g2.value >= 1.0);
  CHECK(g2.value <= 2.0 + 1e-8);
}

TEST_CASE("general formula against a trapezoid reference") {
  struct Case {
    int d;
    double D, K;
  };
  for (const auto& c : {Case{3, 2.0, -1.0}, Case{2, 1.5, 0.4}, Case{5, 1.0, -3.0}}) {
    const auto p = P(c.d, c.D, c.K);
    for (const auto& f : corollary_test_functions(p)) {
      CAPTURE(c.d);
      CAPTURE(f.family_id);
      const double ref = ref_general(c.d, c.D, c.K, f.evaluator);
      CHECK(general_lower_bound(p, f).value == doctest::Approx(ref).epsilon(1e-5));
    }
  }
}

TEST_CASE("general formula dominates the corollary closed forms") {
  for (int d : {2, 3, 5}) {
    for (double D : {0.5, 1.0, 3.0}) {
      for (double K : {-1.0, 0.0, 0.5}) {
        const auto p = P(d, D, K);
        if (K > 0 && D / 2 * std::sqrt(K / (d - 1)) > pi / 2) continue;
        const auto best = optimize_over_family(p, corollary_test_functions(p));
        for (auto id : {BoundId::C9, BoundId::C10, BoundId::C11, BoundId::C12}) {
          const auto r = eval_corollary_bound(id, p);
          CAPTURE(d);
          CAPTURE(D);
          CAPTURE(K);
          CAPTURE(to_string(id));
          if (r.value) CHECK(best.bound >= *r.value * (1 - 1e-6));
        }
      }
    }
  }
}

TEST_CASE("quadrature refinement is stable") {
  const auto p = P(3, 2.0, -1.0);
  QuadratureSpec coarse, fine;
  coarse.relative_tolerance = 1e-7;
  fine.relative_tolerance = 5e-8;
  const double a = general_lower_bound(p, damped_sine_beta(p), coarse).value;
  const double b = general_lower_bound(p, damped_sine_beta(p), fine).value;
  CHECK(std::abs(a - b) <= 1e-7 * std::abs(a));
}

TEST_CASE("test function preconditions") {
  const auto p = P(2, 2.0, 0.5);
  TestFunction negative{[](double r) { return r - 1.0; }, "shifted", {}};
  CHECK_FALSE(is_positive_on_grid(negative, 2.0));
  CHECK_THROWS_AS(general_lower_bound(p, negative), specgap::DomainError);
  CHECK_THROWS_AS(sine_curvature(P(2, 2.0, -1.0)), specgap::DomainError);
  CHECK_THROWS_AS(damped_sine_beta(P(2, 2.0, 1.0)), specgap::DomainError);
}

TEST_CASE("family optimisation") {
  const auto circle = P(1, pi, 0);
  const auto sine = optimize_over_family(circle, sine_family(0.1, 1.0));
  CHECK(sine.bound == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sine.best.parameters.at(0) == doctest::Approx(0.5).epsilon(1e-3));

  const auto sphere = P(2, pi, 1);
  const auto corollary = optimize_over_family(sphere, corollary_test_functions(sphere));
  CHECK(corollary.bound >= 2.0 - 1e-6);

  const auto p = P(3, 1.7, -0.4);
  const std::vector<TestFunction> single{constant_one()};
  const auto one = optimize_over_family(p, single);
  CHECK(one.bound == doctest::Approx(general_lower_bound(p, constant_one()).value));
  CHECK(one.best.family_id == constant_one().family_id);

  CHECK_THROWS_AS(optimize_over_family(p, sine_family(1.0, 0.5)), specgap::DomainError);
  const std::vector<TestFunction> none;
  CHECK_THROWS_AS(optimize_over_family(p, none), specgap::DomainError);
}

TEST_CASE("bounds table: ordering and dominance") {
  const auto sphere = bounds_table(P(2, pi, 1));
  CHECK(*sphere.find(BoundId::C10)->value == doctest::Approx(2.0));
  CHECK(*sphere.find(BoundId::B1)->value == doctest::Approx(2.0));
  CHECK(*sphere.find(BoundId::B2)->value == doctest::Approx(2.0));
  CHECK(sphere.dominance_ok());

  const auto circle = bounds_table(P(1, pi, 0));
  CHECK(*circle.find(BoundId::C9)->value == doctest::Approx(1.0));
  CHECK(*circle.find(BoundId::B4)->value == doctest::Approx(1.0));
  CHECK(*circle.find(BoundId::B3)->value == doctest::Approx(0.5));

  const auto neg = bounds_table(P(5, 2.0, -1.0));
  CHECK(neg.dominance_ok());
  bool seen_absent = false;
  for (std::size_t i = 0; i < neg.rows.size(); ++i) {
    if (!neg.rows[i].value) {
      seen_absent = true;
      continue;
    }
    CHECK_FALSE(seen_absent);
    if (i > 0 && neg.rows[i - 1].value) CHECK(*neg.rows[i - 1].value >= *neg.rows[i].value);
  }
  CHECK(neg.rows.size() == 13);
}

TEST_CASE("dominance grid") {
  int evaluated = 0;
  for (int d : {2, 3, 5, 8}) {
    for (double D : {0.5, 1.0, pi, 5.0}) {
      for (double K : {-2.0, -0.5, 0.0, 0.3, static_cast<double>(d - 1)}) {
        const auto t = bounds_table(P(d, D, K));
        for (const auto& c : t.dominance) {
          CAPTURE(d);
          CAPTURE(D);
          CAPTURE(K);
          CAPTURE(to_string(c.stronger));
          CAPTURE(to_string(c.weaker));
          CHECK(c.ok);
          evaluated += c.evaluated;
        }
      }
    }
  }
  CHECK(evaluated > 100);
}
