#include "specgap/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "specgap/errors.hpp"
#include "specgap/quadrature.hpp"

namespace specgap::geometry {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr char kModule[] = "geometry";
// Relative slack on the Bonnet-Myers boundary (D/2) sqrt(K/(d-1)) = pi/2.
constexpr double kMyersSlack = 1e-12;
constexpr int kPositivitySamples = 1024;
constexpr double kEndpointMargin = 1e-6;
constexpr double kClosedFormTolerance = 1e-9;
constexpr double kNumericTolerance = 1e-6;

double weight_frequency(const GeometryParams& p) {
  if (p.dimension == 1) return 0.0;
  return 0.5 * std::sqrt(std::abs(p.curvature) / (p.dimension - 1));
}

// (D/2) sqrt(K/(d-1)) for K > 0, clamped onto pi/2 inside the slack band.
double cosine_argument(const GeometryParams& p) {
  const double x = weight_frequency(p) * p.diameter;
  if (x > 0.5 * kPi * (1.0 + kMyersSlack)) {
    throw DomainError(kModule,
                      "curvature out of range for the cosine weight: (D/2)sqrt(K/(d-1)) = " +
                          std::to_string(x) + " exceeds pi/2");
  }
  return std::min(x, 0.5 * kPi);
}

// C(r) without range checks; callers have validated the parameters.
double weight(const GeometryParams& p, double r) {
  if (p.dimension == 1 || p.curvature == 0.0) return 1.0;
  const double arg = weight_frequency(p) * r;
  const double base = p.curvature < 0.0 ? std::cosh(arg) : std::cos(arg);
  return std::pow(base, p.dimension - 1);
}

// int_0^x cos^{m} t dt
double cosine_power_integral(int m, double x) {
  auto f = [m](double t) { return std::pow(std::cos(t), m); };
  return integrate(f, 0.0, x, 1e-14, 2000, 1e-300).value;
}

BoundResult not_applicable(BoundId id, std::string condition) {
  BoundResult r;
  r.id = id;
  r.condition = std::move(condition);
  return r;
}

BoundResult applicable(BoundId id, std::string condition, double value) {
  BoundResult r;
  r.id = id;
  r.condition = std::move(condition);
  r.applicable = true;
  r.value = std::max(value, 0.0);
  return r;
}

bool is_closed_form(BoundId id) { return id != BoundId::GF; }

}  // namespace

double GeometryParams::alpha() const {
  return diameter * std::sqrt(std::abs(curvature) * (dimension - 1)) / 2.0;
}

double GeometryParams::alpha_prime() const {
  return diameter * std::sqrt(std::abs(curvature) * std::max(dimension - 1, 2)) / 2.0;
}

void validate(const GeometryParams& params) {
  if (params.dimension < 1) throw DomainError(kModule, "dimension must be ≥ 1");
  if (!(params.diameter > 0.0) || !std::isfinite(params.diameter)) {
    throw DomainError(kModule, "diameter must be a positive finite number");
  }
  if (!std::isfinite(params.curvature)) {
    throw DomainError(kModule, "curvature lower bound must be finite");
  }
}

void validate(const QuadratureSpec& quad) {
  if (!(quad.relative_tolerance > 0.0)) {
    throw DomainError(kModule, "quadrature tolerance must be positive");
  }
  if (quad.max_subdivisions < 1) {
    throw DomainError(kModule, "max subdivisions must be positive");
  }
  if (quad.grid_size < 16) throw DomainError(kModule, "r-grid size must be ≥ 16");
}

std::optional<double> known_eigenvalue(const GeometryParams& p) {
  const bool diameter_pi = std::abs(p.diameter - kPi) <= 1e-12 * kPi;
  if (!diameter_pi) return std::nullopt;
  if (p.dimension >= 2 && p.curvature == p.dimension - 1) return p.dimension;
  if (p.dimension == 1 && p.curvature == 0.0) return 1.0;
  return std::nullopt;
}

std::string_view to_string(BoundId id) {
  static constexpr std::array<std::string_view, 13> names = {
      "B1", "B2", "B3", "B4", "B5", "B6", "B7", "B8", "C9", "C10", "C11", "C12", "GF"};
  return names[static_cast<std::size_t>(id)];
}

BoundId parse_bound_id(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(BoundId::GF); ++i) {
    const auto id = static_cast<BoundId>(i);
    if (to_string(id) == name) return id;
  }
  throw DomainError(kModule, "unknown bound id '" + std::string(name) + "'");
}

double cosh_weight(const GeometryParams& params, double r) {
  validate(params);
  if (!(r > 0.0 && r < params.diameter)) {
    throw DomainError(kModule, "radius must lie in (0, D)");
  }
  if (params.dimension > 1 && params.curvature > 0.0) cosine_argument(params);
  return weight(params, r);
}

BoundResult eval_classical_bound(BoundId id, const GeometryParams& p) {
  validate(p);
  const int d = p.dimension;
  const double D = p.diameter;
  const double K = p.curvature;
  const double pi2_D2 = kPi * kPi / (D * D);

  switch (id) {
    case BoundId::B1:
      if (K < 0.0 || d < 2) return not_applicable(id, "K >= 0, d >= 2");
      return applicable(id, "K >= 0, d >= 2", d * K / (d - 1));
    case BoundId::B2: {
      const std::string cond = "K = d - 1 > 0, D <= pi";
      if (d < 2 || K != d - 1 || D > kPi * (1.0 + kMyersSlack)) return not_applicable(id, cond);
      const double full = cosine_power_integral(d - 1, 0.5 * kPi);
      const double part = cosine_power_integral(d - 1, std::min(0.5 * D, 0.5 * kPi));
      return applicable(id, cond, d * std::pow(full / part, 2.0 / d));
    }
    case BoundId::B3:
      if (K < 0.0) return not_applicable(id, "K >= 0");
      return applicable(id, "K >= 0", 0.5 * pi2_D2);
    case BoundId::B4:
      if (K < 0.0) return not_applicable(id, "K >= 0");
      return applicable(id, "K >= 0", pi2_D2);
    case BoundId::B5: {
      const std::string cond = "K <= 0, d >= 2";
      if (K > 0.0 || d < 2) return not_applicable(id, cond);
      const double a = p.alpha();
      return applicable(id, cond,
                        1.0 / (D * D * (d - 1) * std::exp(1.0 + std::sqrt(1.0 + 16.0 * a * a))));
    }
    case BoundId::B6:
      if (K > 0.0) return not_applicable(id, "K <= 0");
      return applicable(id, "K <= 0", pi2_D2 + K);
    case BoundId::B7:
      if (K > 0.0 || d < 5) return not_applicable(id, "K <= 0, d >= 5");
      return applicable(id, "K <= 0, d >= 5", pi2_D2 * std::exp(-p.alpha()));
    case BoundId::B8:
      if (K > 0.0 || d < 2 || d > 4) return not_applicable(id, "K <= 0, 2 <= d <= 4");
      return applicable(id, "K <= 0, 2 <= d <= 4", 0.5 * pi2_D2 * std::exp(-p.alpha_prime()));
    default:
      break;
  }
  throw DomainError(kModule, "'" + std::string(to_string(id)) + "' is not a classical bound");
}

BoundResult eval_corollary_bound(BoundId id, const GeometryParams& p) {
  validate(p);
  const int d = p.dimension;
  const double D = p.diameter;
  const double K = p.curvature;
  const double pi2_D2 = kPi * kPi / (D * D);

  switch (id) {
    case BoundId::C9:
      if (K < 0.0) return not_applicable(id, "K >= 0");
      return applicable(id, "K >= 0",
                        pi2_D2 + std::max(kPi / (4.0 * d), 1.0 - 2.0 / kPi) * K);
    case BoundId::C10: {
      const std::string cond = "K >= 0, d > 1";
      if (K < 0.0 || d < 2) return not_applicable(id, cond);
      // dK/(d-1) / (1 - cos^d x) -> 8/D^2 as K -> 0.
      if (K == 0.0) return applicable(id, cond, 8.0 / (D * D));
      const double x = cosine_argument(p);
      const double s = std::sin(0.5 * x);
      const double one_minus_cos_d = -std::expm1(d * std::log1p(-2.0 * s * s));
      return applicable(id, cond, d * K / (d - 1) / one_minus_cos_d);
    }
    case BoundId::C11:
      if (K > 0.0) return not_applicable(id, "K <= 0");
      return applicable(id, "K <= 0", pi2_D2 + (0.5 * kPi - 1.0) * K);
    case BoundId::C12: {
      const std::string cond = "K <= 0, d > 1";
      if (K > 0.0 || d < 2) return not_applicable(id, cond);
      const double root = std::sqrt(1.0 - 2.0 * D * D * K / std::pow(kPi, 4));
      const double damp = std::pow(std::cosh(weight_frequency(p) * D), 1 - d);
      return applicable(id, cond, pi2_D2 * root * damp);
    }
    default:
      break;
  }
  throw DomainError(kModule, "'" + std::string(to_string(id)) + "' is not a corollary bound");
}

bool is_positive_on_grid(const TestFunction& f, double diameter) {
  for (int i = 1; i <= kPositivitySamples; ++i) {
    const double r = diameter * i / (kPositivitySamples + 1);
    const double v = f(r);
    if (!(v > 0.0) || !std::isfinite(v)) return false;
  }
  return true;
}

GeneralBound general_lower_bound(const GeometryParams& p, const TestFunction& f,
                                 const QuadratureSpec& quad) {
  validate(p);
  validate(quad);
  if (p.dimension > 1 && p.curvature > 0.0) cosine_argument(p);
  if (!f.evaluator) throw DomainError(kModule, "test function has no evaluator");
  if (!is_positive_on_grid(f, p.diameter)) {
    throw DomainError(kModule, "test function '" + f.family_id +
                                   "' is not strictly positive on (0, D)");
  }

  const double D = p.diameter;
  const double outer_tol = quad.relative_tolerance;
  const double inner_tol = 0.1 * quad.relative_tolerance;
  const int max_sub = quad.max_subdivisions;

  // Tail mass G(s) = int_s^D C(u) f(u) du, then h(s) = G(s) / C(s).
  auto tail_mass = [&](double s) {
    return integrate([&](double u) { return weight(p, u) * f(u); }, s, D, inner_tol, max_sub)
        .value;
  };
  auto integrand = [&](double s) { return tail_mass(s) / weight(p, s); };

  const int n = quad.grid_size;
  const double lo = D * kEndpointMargin;
  const double hi = D * (1.0 - kEndpointMargin);

  GeneralBound out;
  out.grid.resize(n);
  out.ratios.resize(n);
  std::vector<double> cumulative(n);

  double acc = 0.0;
  double prev = 0.0;
  for (int k = 0; k < n; ++k) {
    const double r = lo + (hi - lo) * k / (n - 1);
    acc += integrate(integrand, prev, r, outer_tol, max_sub).value;
    prev = r;
    cumulative[k] = acc;
    out.grid[k] = r;
    out.ratios[k] = 4.0 * f(r) / acc;
  }

  const auto min_it = std::min_element(out.ratios.begin(), out.ratios.end());
  const int k_min = static_cast<int>(min_it - out.ratios.begin());
  out.value = *min_it;
  out.argmin_r = out.grid[k_min];

  // Golden-section refinement between the neighbouring grid points.
  auto ratio_at = [&](double r) {
    const auto upper = std::upper_bound(out.grid.begin(), out.grid.end(), r);
    const int j = std::max(0, static_cast<int>(upper - out.grid.begin()) - 1);
    const double base_r = out.grid[j];
    const double denom = cumulative[j] + integrate(integrand, base_r, r, outer_tol, max_sub).value;
    return 4.0 * f(r) / denom;
  };

  double a = out.grid[std::max(k_min - 1, 0)];
  double b = out.grid[std::min(k_min + 1, n - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = ratio_at(x1);
  double f2 = ratio_at(x2);
  for (int it = 0; it < 40 && (b - a) > 1e-12 * D; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = ratio_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = ratio_at(x2);
    }
  }
  if (std::min(f1, f2) < out.value) {
    out.value = std::min(f1, f2);
    out.argmin_r = f1 < f2 ? x1 : x2;
  }
  return out;
}

TestFunction constant_one() {
  return {[](double) { return 1.0; }, "one", {}};
}

TestFunction sine_beta(const GeometryParams& p) {
  const double beta = kPi / (2.0 * p.diameter);
  return {[beta](double r) { return std::sin(beta * r); }, "sin-beta", {beta}};
}

TestFunction sine_curvature(const GeometryParams& p) {
  if (p.dimension < 2 || !(p.curvature > 0.0)) {
    throw DomainError(kModule, "sin-curvature test function needs K > 0 and d > 1");
  }
  const double gamma = weight_frequency(p);
  return {[gamma](double r) { return std::sin(gamma * r); }, "sin-curvature", {gamma}};
}

TestFunction damped_sine_beta(const GeometryParams& p) {
  if (p.dimension < 2 || p.curvature > 0.0) {
    throw DomainError(kModule, "cosh-sin test function needs K <= 0 and d > 1");
  }
  const double beta = kPi / (2.0 * p.diameter);
  const double gamma = weight_frequency(p);
  const int exponent = 1 - p.dimension;
  return {[=](double r) { return std::pow(std::cosh(gamma * r), exponent) * std::sin(beta * r); },
          "cosh-sin",
          {beta, gamma}};
}

std::vector<TestFunction> corollary_test_functions(const GeometryParams& p) {
  validate(p);
  std::vector<TestFunction> out{sine_beta(p)};
  if (p.dimension > 1 && p.curvature > 0.0) out.push_back(sine_curvature(p));
  if (p.dimension > 1 && p.curvature < 0.0) out.push_back(damped_sine_beta(p));
  return out;
}

TestFamily sine_family(double lo, double hi) {
  return {"sin-gamma", {lo}, {hi}, [](std::span<const double> g) {
            const double gamma = g[0];
            return TestFunction{[gamma](double r) { return std::sin(gamma * r); }, "sin-gamma",
                                {gamma}};
          }};
}

FamilyOptimum optimize_over_family(const GeometryParams& p, std::span<const TestFunction> members,
                                   const QuadratureSpec& quad) {
  if (members.empty()) throw DomainError(kModule, "empty test-function family");
  FamilyOptimum best;
  bool found = false;
  for (const auto& f : members) {
    if (!is_positive_on_grid(f, p.diameter)) {
      ++best.rejected;
      continue;
    }
    const double v = general_lower_bound(p, f, quad).value;
    ++best.evaluations;
    if (!found || v > best.bound) {
      best.best = f;
      best.bound = v;
      found = true;
    }
  }
  if (!found) throw DomainError(kModule, "no family member is positive on (0, D)");
  return best;
}

FamilyOptimum optimize_over_family(const GeometryParams& p, const TestFamily& family,
                                   const QuadratureSpec& quad) {
  validate(p);
  const std::size_t dims = family.lower.size();
  if (dims == 0 || family.upper.size() != dims) {
    throw DomainError(kModule, "empty parameter box for family '" + family.id + "'");
  }
  for (std::size_t i = 0; i < dims; ++i) {
    if (!(family.lower[i] <= family.upper[i])) {
      throw DomainError(kModule, "empty parameter box for family '" + family.id + "'");
    }
  }

  FamilyOptimum best;
  std::vector<double> best_x;
  bool found = false;

  auto evaluate = [&](const std::vector<double>& x) -> std::optional<double> {
    TestFunction f = family.make(x);
    if (!is_positive_on_grid(f, p.diameter)) {
      ++best.rejected;
      return std::nullopt;
    }
    const double v = general_lower_bound(p, f, quad).value;
    ++best.evaluations;
    if (!found || v > best.bound) {
      best.best = std::move(f);
      best.bound = v;
      best_x = x;
      found = true;
    }
    return v;
  };

  const int per_dim =
      dims == 1 ? 21 : std::max(3, static_cast<int>(std::floor(std::pow(200.0, 1.0 / dims))));
  std::vector<int> index(dims, 0);
  std::vector<double> x(dims);
  for (bool done = false; !done;) {
    for (std::size_t i = 0; i < dims; ++i) {
      const double span = family.upper[i] - family.lower[i];
      x[i] = family.lower[i] + span * index[i] / (per_dim - 1);
    }
    evaluate(x);
    std::size_t i = 0;
    while (i < dims && ++index[i] == per_dim) index[i++] = 0;
    done = i == dims;
  }
  if (!found) throw DomainError(kModule, "no member of '" + family.id + "' is positive on (0, D)");

  // Coordinate-wise golden-section ascent around the grid optimum.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (std::size_t i = 0; i < dims; ++i) {
      const double step = (family.upper[i] - family.lower[i]) / (per_dim - 1);
      if (step == 0.0) continue;
      std::vector<double> probe = best_x;
      double a = std::max(family.lower[i], best_x[i] - step);
      double b = std::min(family.upper[i], best_x[i] + step);
      auto value_at = [&](double xi) {
        probe[i] = xi;
        return evaluate(probe).value_or(-1.0);
      };
      double x1 = b - inv_phi * (b - a);
      double x2 = a + inv_phi * (b - a);
      double f1 = value_at(x1);
      double f2 = value_at(x2);
      for (int it = 0; it < 30; ++it) {
        if (f1 > f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - inv_phi * (b - a);
          f1 = value_at(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + inv_phi * (b - a);
          f2 = value_at(x2);
        }
      }
    }
  }
  return best;
}

bool BoundsTable::dominance_ok() const {
  return std::all_of(dominance.begin(), dominance.end(),
                     [](const DominanceCheck& c) { return c.ok; });
}

const BoundResult* BoundsTable::find(BoundId id) const {
  for (const auto& r : rows) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

BoundsTable bounds_table(const GeometryParams& params, const QuadratureSpec& quad) {
  validate(params);
  BoundsTable table;
  table.params = params;

  for (int i = 0; i < static_cast<int>(BoundId::GF); ++i) {
    const auto id = static_cast<BoundId>(i);
    try {
      table.rows.push_back(id <= BoundId::B8 ? eval_classical_bound(id, params)
                                             : eval_corollary_bound(id, params));
    } catch (const std::exception& e) {
      BoundResult failed;
      failed.id = id;
      failed.error = e.what();
      table.rows.push_back(std::move(failed));
    }
  }

  BoundResult gf;
  gf.id = BoundId::GF;
  gf.condition = "sup over corollary test functions";
  try {
    const auto members = corollary_test_functions(params);
    const auto opt = optimize_over_family(params, members, quad);
    gf.applicable = true;
    gf.value = opt.bound;
    table.best_test_function = opt.best.family_id;
  } catch (const std::exception& e) {
    gf.error = e.what();
  }
  table.rows.push_back(std::move(gf));

  static constexpr std::array<std::pair<BoundId, BoundId>, 6> pairs = {{
      {BoundId::C9, BoundId::B4},
      {BoundId::C10, BoundId::B1},
      {BoundId::C10, BoundId::B2},
      {BoundId::C11, BoundId::B6},
      {BoundId::C12, BoundId::B7},
      {BoundId::C12, BoundId::B8},
  }};
  for (const auto& [strong, weak] : pairs) {
    DominanceCheck check{strong, weak};
    const auto* s = table.find(strong);
    const auto* w = table.find(weak);
    check.tolerance = (is_closed_form(strong) && is_closed_form(weak)) ? kClosedFormTolerance
                                                                        : kNumericTolerance;
    if (s && w && s->value && w->value) {
      check.evaluated = true;
      check.ok = *s->value >= *w->value - check.tolerance * std::max(1.0, std::abs(*w->value));
    }
    table.dominance.push_back(check);
  }

  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const BoundResult& a, const BoundResult& b) {
                     if (a.value.has_value() != b.value.has_value()) return a.value.has_value();
                     if (!a.value) return false;
                     return *a.value > *b.value;
                   });
  return table;
}

}  // namespace specgap::geometry
