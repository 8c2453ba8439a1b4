#pragma once

// Cheeger-type isoperimetric constants of symmetric forms, computed by
// exhaustive subset enumeration, and the classical bounds they feed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specgap/forms.hpp"

namespace specgap::cheeger {

using forms::Matrix;
using forms::ReversibleChain;
using forms::SymmetricForm;
using forms::Vector;

/// Largest state count handled by exhaustive enumeration.
inline constexpr int kMaxEnumerationStates = 24;

struct RateWeight {
  Matrix r;  // symmetric, nonnegative
  double alpha = 0.5;
  std::string choice = "q(x)+q(y)";
};

/// r(x, y) = q(x) + q(y), where q(x) = J(x, E) / pi(x). Always admissible.
RateWeight default_weight(const SymmetricForm& form, double alpha);

/// Throws DomainError naming the first state with J^(1)(x, E)/pi(x) > 1.
void check_admissible(const SymmetricForm& form, const RateWeight& w);

/// J^(alpha)_xy = J_xy / r(x,y)^alpha where r > 0, else 0; alpha = 0 is J.
SymmetricForm j_alpha(const SymmetricForm& form, const RateWeight& w);

enum class VariantKind { Poincare, Nash, LogSobolevWang, LogSobolevChen };

struct CheegerVariant {
  VariantKind kind = VariantKind::Poincare;
  double nu = 4.0;  // Nash dimension, nu > 1
  std::vector<double> delta_grid = {1.0, 10.0, 100.0, 1000.0, 10000.0};
};

std::string variant_name(const CheegerVariant& v);
/// "poincare", "nash", "logsob_wang" or "logsob_chen".
VariantKind parse_variant(const std::string& name);

struct CheegerResult {
  CheegerVariant variant;
  double alpha = 0.0;
  std::string r_choice;
  double value = 0.0;
  std::uint64_t argmin_subset = 0;
  int states = 0;
  bool converged = true;
  bool exhaustive = true;  // false for the nested-subset heuristic
  // Wang: infimum over every proper subset next to the small-measure limit.
  std::optional<double> unrestricted;
  // Chen: infimum for each delta of the grid.
  std::vector<double> delta_values;

  /// Membership string, character i is '1' when state i is in the argmin.
  std::string argmin_string() const;
};

/// Exhaustive infimum over subsets (n <= 24) of the variant's quotient of
/// J^(alpha)(A x A^c).
CheegerResult cheeger_constant(const SymmetricForm& form, const CheegerVariant& variant,
                               const RateWeight& w);

/// Same quotients over the nested sets {0..k} and {k..n-1} only; an upper
/// bound on the true infimum for forms too large to enumerate.
CheegerResult cheeger_nested_upper_bound(const SymmetricForm& form, const CheegerVariant& variant,
                                         const RateWeight& w);

struct LawlerSokal {
  double k = 0.0;
  double max_rate = 0.0;  // M = max_x q(x)
  double bound = 0.0;     // k^2 / (2M)
  std::uint64_t argmin_subset = 0;
};

/// Classical conductance k from the fluxes pi_i q_ij of Q (not of the
/// symmetrised form) and the bound k^2 / (2M) <= lambda_1.
LawlerSokal lawler_sokal_bound(const ReversibleChain& chain);

struct DscBound {
  double value = 0.0;
  double min_measure = 0.0;  // pi_*
  double spectral_gap = 0.0;
  bool limit_used = false;   // pi_* = 1/2 handled by its limit
};

/// 2 (1 - 2 pi_*) lambda_1 / log(1/pi_* - 1) for chains with
/// sum_j |q_ij| = 1 on every row. Throws DomainError listing offending rows.
DscBound dsc_log_sobolev_bound(const ReversibleChain& chain);

struct TheoremOptions {
  double nu = 4.0;
  std::optional<double> nash_p;  // defaults to q / (q - 1)
  std::optional<double> nash_q;  // defaults to 1 + nu / 2
  std::vector<double> delta_grid = {1.0, 10.0, 100.0, 1000.0, 10000.0};
  int nash_samples = 300;
  std::uint64_t seed = 20240601;
  forms::LogSobolevOptions log_sobolev;
};

struct InequalityStatus {
  std::string variant;
  double k_half = 0.0;
  bool cheeger_positive = false;
  std::string constant_name;
  double constant = 0.0;  // finite-space inequality constant
  bool holds = false;
};

struct TheoremReport {
  std::vector<CheegerResult> constants;  // poincare, nash, wang, chen at alpha = 1/2
  std::vector<InequalityStatus> checks;
  double spectral_gap = 0.0;
  double log_sobolev = 0.0;
  double nash_constant = 0.0;
  double nash_p = 0.0;
  double nash_q = 0.0;
  std::string r_choice;
  bool all_hold = false;
};

/// k^(1/2) for every variant together with the constant of the matching
/// inequality on the finite space (1/lambda_1, sampled Nash C, 1/sigma).
TheoremReport main_theorem_check(const SymmetricForm& form, const RateWeight& w,
                                 const TheoremOptions& options = {});

}  // namespace specgap::cheeger
