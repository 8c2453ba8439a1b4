#pragma once

// Random reversible chains and reference computations shared by the tests.
// Everything here is built without the library's own solvers.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "specgap/forms.hpp"

namespace testing {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Random connected symmetric weights: a random spanning tree plus extra
/// edges with the given probability, weights log-uniform over two decades.
inline Matrix random_symmetric_weights(std::mt19937_64& rng, int n, double extra_edge = 0.3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix w = Matrix::Zero(n, n);
  auto weight = [&] { return std::pow(10.0, 2.0 * u(rng) - 1.0); };
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    const int a = order[k], b = order[pick(rng)];
    w(a, b) = w(b, a) = weight();
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (w(i, j) == 0.0 && u(rng) < extra_edge) w(i, j) = w(j, i) = weight();
    }
  }
  return w;
}

inline Matrix rates_from(const Matrix& j, const Vector& pi) {
  const int n = static_cast<int>(pi.size());
  Matrix q = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (k != i) q(i, k) = j(i, k) / pi(i);
    }
    q(i, i) = -q.row(i).sum();
  }
  return q;
}

/// Rate matrix q_ij = J_ij / pi_i for random pi and random symmetric J.
inline Matrix random_reversible_rates(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  Vector pi(n);
  for (int i = 0; i < n; ++i) pi(i) = u(rng);
  pi /= pi.sum();
  return rates_from(random_symmetric_weights(rng, n), pi);
}

/// Reversible rates with q(i) = 1/2 on every row: symmetric J of total mass
/// 1/2 and pi_i = 2 sum_j J_ij.
inline Matrix unit_activity_rates(std::mt19937_64& rng, int n) {
  Matrix j = random_symmetric_weights(rng, n, 0.5);
  j *= 0.5 / j.sum();
  const Vector pi = 2.0 * j.rowwise().sum();
  return rates_from(j, pi);
}

/// Stationary law as the normalised kernel of Q^T (full-pivot LU).
inline Vector reference_stationary(const Matrix& q) {
  Eigen::FullPivLU<Matrix> lu(q.transpose());
  Vector v = lu.kernel().col(0);
  return v / v.sum();
}

/// Spectrum of -Q from the general (non-symmetric) eigensolver, ascending.
inline std::vector<double> reference_spectrum(const Matrix& q) {
  Eigen::EigenSolver<Matrix> es(-q);
  std::vector<double> out;
  for (int i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i).real());
  std::sort(out.begin(), out.end());
  return out;
}

inline double reference_gap(const Matrix& q) { return reference_spectrum(q)[1]; }

inline double weighted_mean(const Vector& pi, const Vector& f) { return pi.dot(f); }

inline double weighted_variance(const Vector& pi, const Vector& f) {
  const double m = pi.dot(f);
  return pi.dot(f.cwiseProduct(f)) - m * m;
}

/// 1/2 sum_ij pi_i q_ij (f_j - f_i)^2 straight from the rates.
inline double reference_dirichlet(const Matrix& q, const Vector& pi, const Vector& f) {
  double s = 0.0;
  for (int i = 0; i < q.rows(); ++i) {
    for (int j = 0; j < q.cols(); ++j) {
      if (i != j) s += pi(i) * q(i, j) * (f(j) - f(i)) * (f(j) - f(i));
    }
  }
  return 0.5 * s;
}

inline Vector random_function(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector f(n);
  for (int i = 0; i < n; ++i) f(i) = g(rng);
  return f;
}

}  // namespace testing
