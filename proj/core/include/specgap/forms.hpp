#pragma once

// Finite reversible chains and the symmetric (Dirichlet) forms they carry.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace specgap::forms {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Finite irreducible rate matrix satisfying detailed balance with respect to
/// its stationary distribution. Immutable once built.
class ReversibleChain {
 public:
  int size() const { return static_cast<int>(rates_.rows()); }
  const Matrix& rates() const { return rates_; }
  const Vector& stationary() const { return stationary_; }
  /// q(i) = -q_ii
  double exit_rate(int i) const { return -rates_(i, i); }
  double max_exit_rate() const;

 private:
  friend ReversibleChain build_chain(const Matrix& rates);
  ReversibleChain(Matrix rates, Vector stationary)
      : rates_(std::move(rates)), stationary_(std::move(stationary)) {}

  Matrix rates_;
  Vector stationary_;
};

/// Validates the rate matrix, solves pi Q = 0 with sum(pi) = 1 and checks
/// detailed balance to 1e-12 relative. Throws DomainError for an invalid,
/// reducible or non-reversible Q; the last names the worst pair.
ReversibleChain build_chain(const Matrix& rates);

/// Birth-death chain on {0, .., n-1}: q_{i,i+1} = birth[i], q_{i,i-1} =
/// death[i-1] (death holds a_1 .. a_{n-1}).
ReversibleChain birth_death_chain(std::span<const double> birth, std::span<const double> death);

/// Pair (pi, J) with J symmetric, nonnegative and zero on the diagonal.
class SymmetricForm {
 public:
  /// Throws DomainError when the invariants fail.
  SymmetricForm(Vector measure, Matrix kernel);

  /// J_ij = pi_i q_ij, symmetrised.
  static SymmetricForm from_chain(const ReversibleChain& chain);

  int size() const { return static_cast<int>(measure_.size()); }
  const Vector& measure() const { return measure_; }
  const Matrix& kernel() const { return kernel_; }

 private:
  Vector measure_;
  Matrix kernel_;
};

/// D(f) = 1/2 sum_ij J_ij (f_j - f_i)^2
double dirichlet_form(const SymmetricForm& form, const Vector& f);

/// Eigen-decomposition of the pi-symmetrised generator
/// L = diag(pi)^{-1/2} (diag(J 1) - J) diag(pi)^{-1/2}, eigenvalues ascending.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;  // orthonormal columns in the Euclidean inner product
  Vector sqrt_measure;
};

SpectralDecomposition spectral_decomposition(const SymmetricForm& form);

/// Smallest nonzero eigenvalue of -Q on L^2(pi).
double spectral_gap_exact(const SymmetricForm& form);
double spectral_gap_exact(const ReversibleChain& chain);

/// Eigenfunction of -Q for lambda_1, normalised to unit L^2(pi) norm.
Vector gap_eigenfunction(const SymmetricForm& form);

struct StateFunctionals {
  double variance = 0.0;
  double mean = 0.0;
  double norm1 = 0.0;
  double norm2 = 0.0;
  double entropy = 0.0;  // int f^2 log(f^2 / ||f||^2) dpi
};

double mean(const Vector& measure, const Vector& f);
/// sum pi (f - pi(f))^2, computed in the centred form.
double variance(const Vector& measure, const Vector& f);
double lp_norm(const Vector& measure, const Vector& f, double p);

/// Throws DomainError for the zero function (entropy undefined).
StateFunctionals variance_and_entropy(const Vector& measure, const Vector& f);
StateFunctionals variance_and_entropy(const ReversibleChain& chain, const Vector& f);

/// int f^2 log(|f| / ||f||) dpi, the log-Sobolev denominator (half the
/// entropy above).
double log_sobolev_denominator(const Vector& measure, const Vector& f);

struct LogSobolevOptions {
  int starts = 32;
  std::uint64_t seed = 20240601;
  double gradient_tolerance = 1e-9;
  int max_iterations = 10000;
};

struct LogSobolevResult {
  double value = 0.0;           // min(interior_best, lambda_1)
  double interior_best = 0.0;   // best quotient found by the optimiser
  double spectral_gap = 0.0;    // limit of the quotient along 1 + eps g
  bool limit_attained = false;  // value came from the near-constant limit
  int converged_starts = 0;
  int starts = 0;
  Vector minimiser;             // best interior point, unit L^2(pi) norm
};

/// sigma = inf D(f) / int f^2 log(|f|/||f||) over ||f|| = 1.
///
/// Multi-start projected gradient on the positive part of the unit sphere of
/// L^2(pi) (|f| never increases the quotient), preconditioned by
/// (L + lambda_1)^{-1}, with Barzilai-Borwein steps and nonmonotone Armijo
/// backtracking. Near-constant f approach D(g)/Var(g) >= lambda_1, so
/// the infimum is capped by lambda_1. Throws ConvergenceError when no start
/// reaches the gradient tolerance or collapses onto the constants.
LogSobolevResult log_sobolev_constant(const SymmetricForm& form,
                                      const LogSobolevOptions& options = {});
LogSobolevResult log_sobolev_constant(const ReversibleChain& chain,
                                      const LogSobolevOptions& options = {});

struct NashConstant {
  double value = 0.0;  // max over sampled f of Var(f) / (D(f)^{1/p} ||f||_1^{2/q})
  int samples = 0;
};

/// Smallest C for which the Nash inequality holds on a deterministic random
/// sample of non-constant functions: Gaussian, log-normal and indicator
/// draws, the lambda_1 eigenfunction, and the ramps min(i, k), max(i - k, 0)
/// in state-index order.
NashConstant nash_minimal_constant(const SymmetricForm& form, double p, double q, int samples,
                                   std::uint64_t seed);

// Degree-two homogeneous functionals V used with the Liggett-Stroock and
// algebraic-decay machinery.

/// ||f - pi(f)||_r^2, r in [1, 2]
double centered_lr_norm_sq(const Vector& measure, const Vector& f, double r);
/// Lip(f)^2 with respect to the metric rho (rho_ij > 0 for i != j).
double lipschitz_sq(const Vector& f, const Matrix& metric);
/// Hop distance on the support graph of Q.
Matrix graph_distance(const ReversibleChain& chain);

}  // namespace specgap::forms
