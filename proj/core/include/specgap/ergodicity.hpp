#pragma once

// Semigroup P_t = exp(tQ) of a reversible chain and the decay quantities that
// tie functional inequalities to ergodicity.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specgap/cheeger.hpp"
#include "specgap/forms.hpp"

namespace specgap::ergodicity {

using forms::Matrix;
using forms::ReversibleChain;
using forms::Vector;

/// exp(tQ) through the eigen-decomposition of the pi-symmetrised generator.
/// When sqrt(max pi / min pi) exceeds kSpectralConditionLimit the similarity
/// transform would amplify rounding past usefulness, and P_t comes from a
/// Pade scaling-and-squaring exponential of tQ instead.
class Semigroup {
 public:
  explicit Semigroup(const ReversibleChain& chain);

  /// Row-stochastic P_t; entries clamped at zero. Throws DomainError for t < 0.
  Matrix at(double t) const;
  /// P_t - 1 pi^T. On the spectral path the stationary mode is left out, so
  /// small deviations keep their relative accuracy.
  Matrix deviation(double t) const;
  /// P_t f
  Vector apply(double t, const Vector& f) const;

  const Vector& stationary() const { return pi_; }
  double spectral_gap() const { return eigenvalues_(1); }
  const Vector& eigenvalues() const { return eigenvalues_; }
  /// True when P_t is assembled from the spectral decomposition.
  bool spectral() const { return spectral_; }

  static constexpr double kSpectralConditionLimit = 1e3;

 private:
  Matrix exponential(double t) const;

  Matrix rates_;
  bool spectral_ = true;
  Vector pi_;
  Vector sqrt_pi_;
  Vector eigenvalues_;
  Matrix eigenvectors_;
};

Matrix semigroup_matrix(const ReversibleChain& chain, double t);

enum class Quantity { Variance, TvSup, TvAtState };

struct DecayCurve {
  Quantity quantity = Quantity::Variance;
  int state = -1;  // for TvAtState
  std::vector<double> times;
  std::vector<double> values;
};

struct VarianceDecay {
  DecayCurve curve;
  std::vector<double> envelope;  // Var(f) exp(-2 lambda_1 t)
  double spectral_gap = 0.0;
  bool pass = false;
};

/// Var(P_t f) against Var(f) exp(-2 lambda_1 t) on the given times; passes
/// when every point sits below the envelope times (1 + 1e-8), with an
/// absolute floor of 1e-13 pi(f^2) for rounding.
VarianceDecay variance_decay_check(const ReversibleChain& chain, const Vector& f,
                                   std::span<const double> times);

struct ExponentialFit {
  double rate = 0.0;
  double prefactor = 0.0;
};

struct TvDecay {
  std::vector<DecayCurve> per_state;
  DecayCurve sup;
  std::optional<double> fitted_rate;  // absent when not identifiable
  std::vector<std::optional<ExponentialFit>> per_state_fit;
  // Full variation sum_y |p_t(x,y) - pi_y|, twice the max-over-sets norm.
  static constexpr const char* kNorm = "full-variation";
};

/// Least-squares fit of -log(value) against t over the tail half of the
/// curve, ignoring points below 1e-14.
std::optional<ExponentialFit> fit_exponential_tail(const DecayCurve& curve);

TvDecay tv_decay(const ReversibleChain& chain, std::span<const double> times);

enum class VFunctional { CenteredLr, Lipschitz, Variance };

struct VSpec {
  VFunctional kind = VFunctional::Variance;
  double r = 2.0;                 // exponent for CenteredLr
  std::optional<Matrix> metric;   // Lipschitz metric; graph distance by default
};

double evaluate_v(const VSpec& v, const ReversibleChain& chain, const Vector& f);

struct AlgebraicDecay {
  double constant = 0.0;     // minimal C over the f-set and time grid
  bool infinite = false;     // V(f) = 0 while Var(P_t f) > 0
  bool premise_holds = true; // V(P_t f) <= V(f) on every sample
  double worst_premise_ratio = 0.0;  // max V(P_t f) / V(f)
};

/// Minimal C with Var(P_t f) <= C V(f) / t^{q-1} over the f-set and the
/// positive times, after checking the contraction premise V(P_t f) <= V(f).
AlgebraicDecay algebraic_decay_check(const ReversibleChain& chain, const VSpec& v, double q,
                                     std::span<const Vector> functions,
                                     std::span<const double> times);

struct TruncationFamily {
  std::string name;
  std::function<ReversibleChain(int)> generator;  // state count -> chain
  std::vector<int> sizes;
};

/// Birth-death family on {0, .., n-1} with birth rate b(i) for i < n-1 and
/// death rate a(i) for i >= 1, both given as expressions in i.
TruncationFamily birth_death_family(const std::string& birth_expr, const std::string& death_expr,
                                    std::vector<int> sizes);

enum class Trend { DecayingToZero, BoundedBelow, Undetermined };

std::string to_string(Trend t);

/// Decaying-to-zero when the last value is below a quarter of the first and
/// the sequence is nonincreasing within 1e-9 relative; bounded-below
/// otherwise. Fewer than two values are undetermined.
Trend classify_trend(std::span<const double> values);

struct ProbeOptions {
  int enumeration_limit = 20;  // larger sizes use the nested-subset heuristic
  double nu = 4.0;
  int nash_samples = 200;
  int time_points = 81;
  double horizon_gap_multiples = 20.0;  // max t = multiple / lambda_1
  std::uint64_t seed = 20240601;
  forms::LogSobolevOptions log_sobolev;
};

struct ProbeRow {
  int size = 0;
  std::optional<std::string> error;
  double spectral_gap = 0.0;
  double log_sobolev = 0.0;
  double nash_constant = 0.0;
  std::optional<double> tv_rate;
  double k_poincare = 0.0;
  double k_nash = 0.0;
  double k_wang = 0.0;
  double k_chen = 0.0;
  bool cheeger_exhaustive = true;
};

struct ProbeTrend {
  std::string quantity;
  Trend trend = Trend::Undetermined;
};

struct ProbeReport {
  std::string family;
  std::vector<ProbeRow> rows;
  std::vector<ProbeTrend> trends;
  // lambda_1 and the sup-TV rate share a trend (Poincare <=> exponential).
  bool poincare_exponential_consistent = false;
  // A Nash-controlled family keeps sigma and the TV rate bounded below.
  bool nash_implication_consistent = false;
  std::string trend_rule =
      "decaying-to-zero iff last < first/4 and nonincreasing within 1e-9; Nash tracked as 1/C";

  Trend trend_of(const std::string& quantity) const;
};

/// Evaluates each size of the family; failures are recorded per row.
ProbeReport diagram_probe(const TruncationFamily& family, const ProbeOptions& options = {});

}  // namespace specgap::ergodicity
