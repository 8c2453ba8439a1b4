#pragma once

// Lower bounds for the first non-trivial eigenvalue of the Laplacian on a
// compact Riemannian manifold, expressed through dimension, diameter and a
// lower bound on Ricci curvature.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace specgap::geometry {

struct GeometryParams {
  int dimension = 1;      // d >= 1
  double diameter = 1.0;  // D > 0
  double curvature = 0.0; // K, Ricci >= K g

  /// D sqrt(|K| (d - 1)) / 2
  double alpha() const;
  /// D sqrt(|K| max(d - 1, 2)) / 2
  double alpha_prime() const;
};

/// Throws DomainError unless d >= 1, D > 0 and K is finite.
void validate(const GeometryParams& params);

/// Exact lambda_1 when the parameters describe the unit sphere S^d (d >= 2,
/// K = d - 1, D = pi) or the unit circle (d = 1, K = 0, D = pi).
std::optional<double> known_eigenvalue(const GeometryParams& params);

enum class BoundId { B1, B2, B3, B4, B5, B6, B7, B8, C9, C10, C11, C12, GF };

std::string_view to_string(BoundId id);
/// Throws DomainError for names outside {B1..B8, C9..C12, GF}.
BoundId parse_bound_id(std::string_view name);

struct BoundResult {
  BoundId id = BoundId::B1;
  std::optional<double> value;  // present iff applicable
  bool applicable = false;
  std::string condition;
  std::optional<std::string> error;  // evaluator failure inside bounds_table
};

struct QuadratureSpec {
  double relative_tolerance = 1e-10;
  int max_subdivisions = 400;
  int grid_size = 256;
};

void validate(const QuadratureSpec& quad);

struct TestFunction {
  std::function<double(double)> evaluator;
  std::string family_id;
  std::vector<double> parameters;

  double operator()(double r) const { return evaluator(r); }
};

/// Radial weight C(r): cosh^{d-1} of (r/2) sqrt(-K/(d-1)) for K <= 0, its
/// cosine continuation for K > 0, and 1 in dimension one.
double cosh_weight(const GeometryParams& params, double r);

BoundResult eval_classical_bound(BoundId id, const GeometryParams& params);
BoundResult eval_corollary_bound(BoundId id, const GeometryParams& params);

struct GeneralBound {
  double value = 0.0;
  double argmin_r = 0.0;
  std::vector<double> grid;    // interior r-grid
  std::vector<double> ratios;  // 4 f(r) / I(r) on the grid
};

/// inf over r of 4 f(r) / int_0^r C(s)^{-1} int_s^D C(u) f(u) du ds.
///
/// The infimum is taken on a uniform interior grid, refined by golden-section
/// search around the grid minimiser. Both integrals are adaptive; the inner
/// one runs at a tenth of the requested relative tolerance.
GeneralBound general_lower_bound(const GeometryParams& params, const TestFunction& f,
                                 const QuadratureSpec& quad = {});

/// Checks f > 0 on 1024 interior sample points of (0, D).
bool is_positive_on_grid(const TestFunction& f, double diameter);

// Test functions behind the corollary closed forms. beta = pi / (2D) and
// gamma = sqrt(|K| / (d - 1)) / 2.
TestFunction constant_one();
TestFunction sine_beta(const GeometryParams& params);
TestFunction sine_curvature(const GeometryParams& params);     // K > 0, d > 1
TestFunction damped_sine_beta(const GeometryParams& params);   // K <= 0, d > 1
/// The corollary generators that make sense for the given parameters.
std::vector<TestFunction> corollary_test_functions(const GeometryParams& params);

/// Parametric test-function family over a box of parameters.
struct TestFamily {
  std::string id;
  std::vector<double> lower;
  std::vector<double> upper;
  std::function<TestFunction(std::span<const double>)> make;
};

/// sin(gamma r) for gamma in [lo, hi].
TestFamily sine_family(double lo, double hi);

struct FamilyOptimum {
  TestFunction best;
  double bound = 0.0;
  int evaluations = 0;
  int rejected = 0;  // members outside the positive class on the grid
};

/// Deterministic grid search followed by coordinate-wise golden-section
/// refinement inside the box.
FamilyOptimum optimize_over_family(const GeometryParams& params, const TestFamily& family,
                                   const QuadratureSpec& quad = {});
/// Best member of a finite list of test functions.
FamilyOptimum optimize_over_family(const GeometryParams& params,
                                   std::span<const TestFunction> members,
                                   const QuadratureSpec& quad = {});

struct DominanceCheck {
  BoundId stronger;
  BoundId weaker;
  bool evaluated = false;  // both sides applicable and evaluated
  bool ok = true;
  double tolerance = 0.0;
};

struct BoundsTable {
  GeometryParams params;
  std::vector<BoundResult> rows;  // value-descending, absent values last
  std::vector<DominanceCheck> dominance;
  std::optional<std::string> best_test_function;  // generator of the GF row

  bool dominance_ok() const;
  const BoundResult* find(BoundId id) const;
};

/// All of B1..B8, C9..C12 and the general formula over the corollary test
/// functions, with the dominance pairs C9>=B4, C10>=B1, C10>=B2, C11>=B6,
/// C12>=B7, C12>=B8.
BoundsTable bounds_table(const GeometryParams& params, const QuadratureSpec& quad = {});

}  // namespace specgap::geometry
