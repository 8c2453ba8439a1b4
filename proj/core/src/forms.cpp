#include "specgap/forms.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <vector>

#include "specgap/errors.hpp"

namespace specgap::forms {
namespace {

constexpr char kModule[] = "forms";
constexpr double kRowSumTolerance = 1e-12;
constexpr double kBalanceTolerance = 1e-12;

std::vector<bool> reachable(const Matrix& q, bool forward) {
  const int n = static_cast<int>(q.rows());
  std::vector<bool> seen(n, false);
  std::deque<int> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    for (int j = 0; j < n; ++j) {
      const double rate = forward ? q(i, j) : q(j, i);
      if (j != i && rate > 0.0 && !seen[j]) {
        seen[j] = true;
        queue.push_back(j);
      }
    }
  }
  return seen;
}

bool all_true(const std::vector<bool>& v) {
  return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
}

Vector solve_stationary(const Matrix& q) {
  const int n = static_cast<int>(q.rows());
  Matrix a(n + 1, n);
  a.topRows(n) = q.transpose();
  a.row(n).setOnes();
  Vector b = Vector::Zero(n + 1);
  b(n) = 1.0;
  return a.colPivHouseholderQr().solve(b);
}

// Stationary law propagated along a BFS tree by detailed balance. Only valid
// when the support of Q is symmetric; more accurate than the dense solve.
std::optional<Vector> balance_tree_measure(const Matrix& q) {
  const int n = static_cast<int>(q.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && (q(i, j) > 0.0) != (q(j, i) > 0.0)) return std::nullopt;
    }
  }
  Vector w = Vector::Zero(n);
  w(0) = 1.0;
  std::vector<bool> seen(n, false);
  seen[0] = true;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    for (int j = 0; j < n; ++j) {
      if (j != i && q(i, j) > 0.0 && !seen[j]) {
        w(j) = w(i) * q(i, j) / q(j, i);
        seen[j] = true;
        queue.push_back(j);
      }
    }
  }
  return w / w.sum();
}

// (Lf)_i = sum_j J_ij (f_i - f_j)
Vector apply_laplacian(const Matrix& kernel, const Vector& f) {
  return kernel.rowwise().sum().cwiseProduct(f) - kernel * f;
}

}  // namespace

double ReversibleChain::max_exit_rate() const {
  return (-rates_.diagonal()).maxCoeff();
}

ReversibleChain build_chain(const Matrix& q) {
  const int n = static_cast<int>(q.rows());
  if (n < 2 || q.cols() != n) {
    throw DomainError(kModule, "rate matrix must be square with at least two states");
  }
  if (!q.allFinite()) throw DomainError(kModule, "rate matrix has non-finite entries");
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && q(i, j) < 0.0) {
        throw DomainError(kModule, "negative off-diagonal rate q(" + std::to_string(i) + "," +
                                       std::to_string(j) + ")");
      }
    }
    if (std::abs(q.row(i).sum()) > kRowSumTolerance * scale * n) {
      throw DomainError(kModule, "row " + std::to_string(i) + " of Q does not sum to zero");
    }
  }
  if (!all_true(reachable(q, true)) || !all_true(reachable(q, false))) {
    throw DomainError(kModule, "rate matrix is reducible (more than one communicating class)");
  }

  Vector pi = solve_stationary(q);
  if (auto tree = balance_tree_measure(q)) {
    if ((*tree - pi).cwiseAbs().maxCoeff() <= 1e-6 * pi.cwiseAbs().maxCoeff()) pi = *tree;
  }
  if ((pi.array() <= 0.0).any()) {
    throw DomainError(kModule, "stationary distribution is not strictly positive");
  }

  double worst = 0.0;
  int wi = -1;
  int wj = -1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double forward = pi(i) * q(i, j);
      const double backward = pi(j) * q(j, i);
      const double gap = std::abs(forward - backward);
      if (gap > kBalanceTolerance * std::max(forward, backward) && gap > worst) {
        worst = gap;
        wi = i;
        wj = j;
      }
    }
  }
  if (wi >= 0) {
    throw DomainError(kModule, "rate matrix is not reversible: detailed balance fails worst at (" +
                                   std::to_string(wi) + "," + std::to_string(wj) +
                                   "), |pi_i q_ij - pi_j q_ji| = " + std::to_string(worst));
  }
  return ReversibleChain(q, pi);
}

ReversibleChain birth_death_chain(std::span<const double> birth, std::span<const double> death) {
  if (birth.size() != death.size() || birth.empty()) {
    throw DomainError(kModule, "birth-death chain needs n-1 birth and n-1 death rates, n >= 2");
  }
  const int n = static_cast<int>(birth.size()) + 1;
  Matrix q = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    q(i, i + 1) = birth[i];
    q(i + 1, i) = death[i];
  }
  for (int i = 0; i < n; ++i) q(i, i) = -(q.row(i).sum());
  return build_chain(q);
}

SymmetricForm::SymmetricForm(Vector measure, Matrix kernel)
    : measure_(std::move(measure)), kernel_(std::move(kernel)) {
  const int n = static_cast<int>(measure_.size());
  if (kernel_.rows() != n || kernel_.cols() != n) {
    throw DomainError(kModule, "kernel and measure dimensions differ");
  }
  if ((measure_.array() <= 0.0).any() || std::abs(measure_.sum() - 1.0) > 1e-12) {
    throw DomainError(kModule, "measure must be a strictly positive probability vector");
  }
  const double scale = std::max(1.0, kernel_.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i) {
    if (kernel_(i, i) != 0.0) throw DomainError(kModule, "kernel must vanish on the diagonal");
    for (int j = 0; j < n; ++j) {
      if (kernel_(i, j) < 0.0) throw DomainError(kModule, "kernel must be nonnegative");
      if (std::abs(kernel_(i, j) - kernel_(j, i)) > 1e-12 * scale) {
        throw DomainError(kModule, "kernel must be symmetric");
      }
    }
  }
}

SymmetricForm SymmetricForm::from_chain(const ReversibleChain& chain) {
  const Vector& pi = chain.stationary();
  Matrix j = pi.asDiagonal() * chain.rates();
  j.diagonal().setZero();
  Matrix sym = 0.5 * (j + j.transpose());
  return SymmetricForm(pi, std::move(sym));
}

double dirichlet_form(const SymmetricForm& form, const Vector& f) {
  if (f.size() != form.size()) throw DomainError(kModule, "function length differs from state count");
  const Matrix& j = form.kernel();
  double total = 0.0;
  for (int a = 0; a < form.size(); ++a) {
    for (int b = a + 1; b < form.size(); ++b) {
      const double diff = f(b) - f(a);
      total += j(a, b) * diff * diff;
    }
  }
  return total;  // the 1/2 cancels the double count over ordered pairs
}

SpectralDecomposition spectral_decomposition(const SymmetricForm& form) {
  const Vector sqrt_pi = form.measure().cwiseSqrt();
  const Vector inv_sqrt = sqrt_pi.cwiseInverse();
  Matrix gen = -form.kernel();
  gen.diagonal() = form.kernel().rowwise().sum();
  Matrix sym = inv_sqrt.asDiagonal() * gen * inv_sqrt.asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError(kModule, "symmetric eigensolver failed", 0.0);
  }
  return {solver.eigenvalues(), solver.eigenvectors(), sqrt_pi};
}

double spectral_gap_exact(const SymmetricForm& form) {
  if (form.size() < 2) throw DomainError(kModule, "spectral gap needs at least two states");
  return spectral_decomposition(form).eigenvalues(1);
}

double spectral_gap_exact(const ReversibleChain& chain) {
  return spectral_gap_exact(SymmetricForm::from_chain(chain));
}

Vector gap_eigenfunction(const SymmetricForm& form) {
  const auto dec = spectral_decomposition(form);
  Vector f = dec.eigenvectors.col(1).cwiseQuotient(dec.sqrt_measure);
  return f / std::sqrt(form.measure().dot(f.cwiseAbs2()));
}

double mean(const Vector& measure, const Vector& f) { return measure.dot(f); }

double variance(const Vector& measure, const Vector& f) {
  const Vector centred = f.array() - mean(measure, f);
  return measure.dot(centred.cwiseAbs2());
}

double lp_norm(const Vector& measure, const Vector& f, double p) {
  return std::pow(measure.dot(f.cwiseAbs().array().pow(p).matrix()), 1.0 / p);
}

StateFunctionals variance_and_entropy(const Vector& measure, const Vector& f) {
  if (f.size() != measure.size()) {
    throw DomainError(kModule, "function length differs from state count");
  }
  if (!f.allFinite()) throw DomainError(kModule, "function has non-finite entries");
  StateFunctionals out;
  out.mean = mean(measure, f);
  out.variance = variance(measure, f);
  out.norm1 = lp_norm(measure, f, 1.0);
  out.norm2 = lp_norm(measure, f, 2.0);
  if (out.norm2 == 0.0) throw DomainError(kModule, "entropy undefined for the zero function");
  out.entropy = 2.0 * log_sobolev_denominator(measure, f);
  return out;
}

StateFunctionals variance_and_entropy(const ReversibleChain& chain, const Vector& f) {
  return variance_and_entropy(chain.stationary(), f);
}

double log_sobolev_denominator(const Vector& measure, const Vector& f) {
  const double norm = std::sqrt(measure.dot(f.cwiseAbs2()));
  if (norm == 0.0) throw DomainError(kModule, "entropy undefined for the zero function");
  double total = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const double a = std::abs(f(i));
    if (a > 0.0) total += measure(i) * a * a * std::log(a / norm);
  }
  return std::max(total, 0.0);
}

namespace {

struct Quotient {
  double value;
  double energy;
  double entropy;
};

Quotient ls_quotient(const SymmetricForm& form, const Vector& f) {
  const double energy = dirichlet_form(form, f);
  const double entropy = log_sobolev_denominator(form.measure(), f);
  return {entropy > 0.0 ? energy / entropy : std::numeric_limits<double>::infinity(), energy,
          entropy};
}

// Riemannian gradient of D/L on the unit sphere of L^2(pi), in L^2(pi)
// coordinates. f has unit norm and strictly positive entries.
Vector ls_gradient(const SymmetricForm& form, const Vector& f, const Quotient& q) {
  const Vector& pi = form.measure();
  const Vector grad_energy = 2.0 * apply_laplacian(form.kernel(), f).cwiseQuotient(pi);
  Vector grad_entropy(f.size());
  for (int i = 0; i < f.size(); ++i) grad_entropy(i) = 2.0 * f(i) * std::log(f(i));
  Vector g = (grad_energy * q.entropy - q.energy * grad_entropy) / (q.entropy * q.entropy);
  g -= pi.dot(g.cwiseProduct(f)) * f;
  return g;
}

double pi_norm(const Vector& pi, const Vector& v) { return std::sqrt(pi.dot(v.cwiseAbs2())); }

Vector retract(const Vector& pi, const Vector& v) {
  Vector out = v.cwiseAbs().cwiseMax(1e-300);
  return out / pi_norm(pi, out);
}

// A start has joined the near-constant limit once its centred norm c drops
// below kCollapseRadius, or below kPlateauRadius with the quotient in
// [lambda_1, lambda_1 (1 + c)]. Quotients under lambda_1 keep descending.
constexpr double kCollapseRadius = 1e-3;
constexpr double kPlateauRadius = 5e-2;

enum class StartOutcome { Converged, Collapsed, Exhausted };

struct StartResult {
  Vector f;
  double value;
  StartOutcome outcome;
};

// The descent direction is the gradient preconditioned by (L + lambda_1)^{-1},
// L the pi-weighted Laplacian, so that the step count stays flat as the rates
// spread over several decades. Step lengths are Barzilai-Borwein in the
// metric of the preconditioner, accepted by a nonmonotone Armijo test.
struct Preconditioner {
  Matrix a;  // L + lambda_1 diag(pi)
  Eigen::LLT<Matrix> llt;
};

StartResult descend(const SymmetricForm& form, const Preconditioner& precond, Vector f,
                    double gap, const LogSobolevOptions& options) {
  const Vector& pi = form.measure();
  auto direction = [&](const Vector& g, const Vector& at) {
    Vector d = precond.llt.solve(pi.cwiseProduct(g));
    d -= pi.dot(d.cwiseProduct(at)) * at;
    return d;
  };
  f = retract(pi, f);
  Quotient q = ls_quotient(form, f);
  Vector g = ls_gradient(form, f, q);
  Vector d = direction(g, f);
  double step = 1.0 / std::max(1.0, pi_norm(pi, d));
  // Nonmonotone Armijo reference: the largest of the last few quotients.
  constexpr std::size_t kMemory = 10;
  std::deque<double> recent{q.value};

  for (int it = 0; it < options.max_iterations; ++it) {
    const double centred = pi_norm(pi, f.array() - mean(pi, f));
    if (centred < kCollapseRadius ||
        (centred < kPlateauRadius && q.value >= gap && q.value <= gap * (1.0 + centred))) {
      return {f, q.value, StartOutcome::Collapsed};
    }
    if (pi_norm(pi, g) <= options.gradient_tolerance) return {f, q.value, StartOutcome::Converged};

    const double slope = pi.dot(g.cwiseProduct(d));
    const double reference = *std::max_element(recent.begin(), recent.end());
    Vector next;
    Quotient nq{};
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      next = retract(pi, f - step * d);
      nq = ls_quotient(form, next);
      if (nq.value <= reference - 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No descent available at machine precision: a stationary point.
      return {f, q.value, StartOutcome::Converged};
    }
    const Vector next_g = ls_gradient(form, next, nq);
    const Vector s = next - f;
    const double sy = pi.dot(s.cwiseProduct(next_g - g));
    const double sas = s.dot(precond.a * s);
    step = sy > 0.0 ? sas / sy : 2.0 * step;
    f = next;
    q = nq;
    g = next_g;
    d = direction(g, f);
    recent.push_back(q.value);
    if (recent.size() > kMemory) recent.pop_front();
  }
  return {f, q.value, StartOutcome::Exhausted};
}

}  // namespace

LogSobolevResult log_sobolev_constant(const SymmetricForm& form, const LogSobolevOptions& options) {
  if (form.size() > 200) throw DomainError(kModule, "log-Sobolev optimisation limited to n <= 200");
  if (options.starts < 1) throw DomainError(kModule, "need at least one optimiser start");

  LogSobolevResult out;
  out.spectral_gap = spectral_gap_exact(form);
  out.starts = options.starts;
  out.interior_best = std::numeric_limits<double>::infinity();

  const int n = form.size();
  Matrix laplacian = -form.kernel();
  laplacian.diagonal() = form.kernel().rowwise().sum();
  Preconditioner precond;
  precond.a = laplacian;
  precond.a.diagonal() += out.spectral_gap * form.measure();
  precond.llt.compute(precond.a);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> spread(0.05, 3.0);
  for (int s = 0; s < options.starts; ++s) {
    const double width = spread(rng);
    Vector start(n);
    for (int i = 0; i < n; ++i) start(i) = std::exp(width * normal(rng));
    const auto result = descend(form, precond, start, out.spectral_gap, options);
    if (result.outcome != StartOutcome::Exhausted) ++out.converged_starts;
    if (result.value < out.interior_best) {
      out.interior_best = result.value;
      out.minimiser = result.f;
    }
  }
  if (out.converged_starts == 0) {
    throw ConvergenceError(kModule, "log-Sobolev optimiser did not converge from any start",
                           std::min(out.interior_best, out.spectral_gap));
  }
  out.limit_attained = out.spectral_gap <= out.interior_best;
  out.value = std::min(out.interior_best, out.spectral_gap);
  return out;
}

LogSobolevResult log_sobolev_constant(const ReversibleChain& chain,
                                      const LogSobolevOptions& options) {
  return log_sobolev_constant(SymmetricForm::from_chain(chain), options);
}

NashConstant nash_minimal_constant(const SymmetricForm& form, double p, double q, int samples,
                                   std::uint64_t seed) {
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError(kModule, "Nash exponents must be positive");
  if (samples < 1) throw DomainError(kModule, "need at least one Nash sample");
  const Vector& pi = form.measure();
  const int n = form.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  NashConstant out;
  auto consider = [&](const Vector& f) {
    const double energy = dirichlet_form(form, f);
    const double var = variance(pi, f);
    if (!(energy > 0.0) || !(var > 0.0)) return;
    const double ratio =
        var / (std::pow(energy, 1.0 / p) * std::pow(lp_norm(pi, f, 1.0), 2.0 / q));
    out.value = std::max(out.value, ratio);
    ++out.samples;
  };

  if (n >= 2) consider(gap_eigenfunction(form));
  for (int k = 1; k < n; ++k) {
    Vector up(n), down(n);
    for (int i = 0; i < n; ++i) {
      up(i) = std::min(i, k);
      down(i) = std::max(i - k, 0);
    }
    consider(up);
    consider(down);
  }
  for (int s = 0; s < samples; ++s) {
    Vector f(n);
    switch (s % 3) {
      case 0:
        for (int i = 0; i < n; ++i) f(i) = normal(rng);
        break;
      case 1:
        for (int i = 0; i < n; ++i) f(i) = std::exp(normal(rng));
        break;
      default:
        for (int i = 0; i < n; ++i) f(i) = coin(rng) ? 1.0 : 0.0;
        break;
    }
    consider(f);
  }
  return out;
}

double centered_lr_norm_sq(const Vector& measure, const Vector& f, double r) {
  if (r < 1.0 || r > 2.0) throw DomainError(kModule, "L^r exponent must lie in [1, 2]");
  const Vector centred = f.array() - mean(measure, f);
  const double norm = lp_norm(measure, centred, r);
  return norm * norm;
}

double lipschitz_sq(const Vector& f, const Matrix& metric) {
  const int n = static_cast<int>(f.size());
  if (metric.rows() != n || metric.cols() != n) {
    throw DomainError(kModule, "metric dimensions differ from state count");
  }
  double lip = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!(metric(i, j) > 0.0)) throw DomainError(kModule, "metric must be positive off the diagonal");
      lip = std::max(lip, std::abs(f(i) - f(j)) / metric(i, j));
    }
  }
  return lip * lip;
}

Matrix graph_distance(const ReversibleChain& chain) {
  const int n = chain.size();
  const Matrix& q = chain.rates();
  Matrix dist = Matrix::Constant(n, n, std::numeric_limits<double>::infinity());
  for (int src = 0; src < n; ++src) {
    dist(src, src) = 0.0;
    std::deque<int> queue{src};
    while (!queue.empty()) {
      const int i = queue.front();
      queue.pop_front();
      for (int j = 0; j < n; ++j) {
        if (j != i && (q(i, j) > 0.0 || q(j, i) > 0.0) && std::isinf(dist(src, j))) {
          dist(src, j) = dist(src, i) + 1.0;
          queue.push_back(j);
        }
      }
    }
  }
  return dist;
}

}  // namespace specgap::forms
