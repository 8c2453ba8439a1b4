#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "specgap/errors.hpp"

namespace specgap {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (positive half; node 0 is the centre).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.000000000000000000000000000000000, 0.207784955007898467600689403773245,
    0.405845151377397166906606412076961, 0.586087235467691130294144845693013,
    0.741531185599394439863864773280788, 0.864864423359769072789712788640926,
    0.949107912342758524526189684047851, 0.991455371120812639206854697526329};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.209482141084727828012999174891714, 0.204432940075298892414161999234649,
    0.190350578064785409913256402421014, 0.169004726639267902826583426598550,
    0.140653259715525918745189590510238, 0.104790010322250183839876322541518,
    0.063092092629978553290700663189204, 0.022935322010529224963732008058970};
// Gauss weights for the odd-indexed Kronrod nodes (0, 2, 4, 6 in the table).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.417959183673469387755102040816327, 0.381830050505118944950369775488975,
    0.279705391489276667901467771423780, 0.129484966168869693270611432679082};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(const F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = kKronrodWeights[0] * fc;
  double gauss = kGaussWeights[0] * fc;
  for (std::size_t i = 1; i < kKronrodNodes.size(); ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7, 15) quadrature of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below max(rel_tol * |I|, abs_tol). Throws ConvergenceError
/// carrying the worst remaining panel estimate once max_subdivisions is
/// exhausted.
template <class F>
QuadratureResult integrate(const F& f, double a, double b, double rel_tol,
                           int max_subdivisions, double abs_tol = 1e-300) {
  if (a == b) return {};
  if (b < a) {
    auto r = integrate(f, b, a, rel_tol, max_subdivisions, abs_tol);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<detail::Panel> panels;
  std::vector<detail::Panel> frozen;
  auto first = detail::gauss_kronrod_15(f, a, b);
  double total = first.value;
  double total_error = first.error;
  panels.push(first);

  int subdivisions = 0;
  while (!panels.empty() && total_error > std::max(rel_tol * std::abs(total), abs_tol)) {
    if (subdivisions >= max_subdivisions) {
      throw ConvergenceError(
          "quadrature",
          "no convergence within " + std::to_string(max_subdivisions) +
              " subdivisions; worst panel [" + std::to_string(panels.top().a) + ", " +
              std::to_string(panels.top().b) + "] error estimate " +
              std::to_string(panels.top().error),
          total);
    }
    const auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in floating point; accept it.
      total_error -= worst.error;
      frozen.push_back(worst);
      continue;
    }
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++subdivisions;
  }

  // Re-sum to shed accumulated rounding from the running updates.
  double resummed = 0.0;
  double err = 0.0;
  for (const auto& p : frozen) {
    resummed += p.value;
    err += p.error;
  }
  while (!panels.empty()) {
    resummed += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  return {resummed, err, subdivisions};
}

}  // namespace specgap
