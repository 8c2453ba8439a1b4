#include "specgap/cheeger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "specgap/errors.hpp"
#include "specgap/subsets.hpp"

namespace specgap::cheeger {
namespace {

constexpr char kModule[] = "cheeger";
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAdmissibleSlack = 1e-12;
constexpr double kChenStability = 1e-6;
constexpr double kRowActivityTolerance = 1e-9;

void check_variant(const CheegerVariant& v) {
  if (v.kind == VariantKind::Nash && !(v.nu > 1.0)) {
    throw DomainError(kModule, "Nash variant needs nu > 1");
  }
  if (v.kind == VariantKind::LogSobolevChen) {
    if (v.delta_grid.empty()) throw DomainError(kModule, "empty delta grid");
    for (std::size_t i = 0; i < v.delta_grid.size(); ++i) {
      if (!(v.delta_grid[i] > 0.0) || (i > 0 && !(v.delta_grid[i] > v.delta_grid[i - 1]))) {
        throw DomainError(kModule, "delta grid must be positive and strictly increasing");
      }
    }
  }
}

// Accumulates the infimum of one variant's quotient over visited subsets.
class VariantAccumulator {
 public:
  VariantAccumulator(const CheegerVariant& v, int n, double min_atom)
      : v_(v), full_((n >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1),
        min_atom_(min_atom), chen_best_(v.delta_grid.size(), kInf),
        chen_arg_(v.delta_grid.size(), 0) {}

  void visit(std::uint64_t mask, double boundary, double mass) {
    const bool proper = mask != full_;
    switch (v_.kind) {
      case VariantKind::Poincare:
        if (proper) offer(boundary / std::min(mass, 1.0 - mass), mask);
        break;
      case VariantKind::Nash:
        if (proper) {
          offer(boundary / std::pow(std::min(mass, 1.0 - mass), (v_.nu - 1.0) / v_.nu), mask);
        }
        break;
      case VariantKind::LogSobolevWang:
        if (proper) {
          const double q = boundary / (mass * std::sqrt(std::log(std::numbers::e + 1.0 / mass)));
          if (q < unrestricted_) unrestricted_ = q;
          if (std::abs(mass - min_atom_) <= 1e-12 * min_atom_) offer(q, mask);
        }
        break;
      case VariantKind::LogSobolevChen: {
        const double scale = mass * std::sqrt(1.0 - std::log(std::min(mass, 1.0)));
        for (std::size_t d = 0; d < v_.delta_grid.size(); ++d) {
          const double q = (boundary + v_.delta_grid[d] * mass) / scale;
          if (q < chen_best_[d]) {
            chen_best_[d] = q;
            chen_arg_[d] = mask;
          }
        }
        break;
      }
    }
  }

  void finish(CheegerResult& out) const {
    out.value = best_;
    out.argmin_subset = arg_;
    if (v_.kind == VariantKind::LogSobolevWang) out.unrestricted = unrestricted_;
    if (v_.kind == VariantKind::LogSobolevChen) {
      out.delta_values = chen_best_;
      out.value = chen_best_.back();
      out.argmin_subset = chen_arg_.back();
      const std::size_t m = chen_best_.size();
      out.converged = m >= 2 && std::abs(chen_best_[m - 1] - chen_best_[m - 2]) <
                                    kChenStability * std::abs(chen_best_[m - 1]);
    }
  }

 private:
  void offer(double q, std::uint64_t mask) {
    if (q < best_) {
      best_ = q;
      arg_ = mask;
    }
  }

  const CheegerVariant& v_;
  std::uint64_t full_;
  double min_atom_;
  double best_ = kInf;
  std::uint64_t arg_ = 0;
  double unrestricted_ = kInf;
  std::vector<double> chen_best_;
  std::vector<std::uint64_t> chen_arg_;
};

CheegerResult make_result(const SymmetricForm& form, const CheegerVariant& variant,
                          const RateWeight& w) {
  CheegerResult out;
  out.variant = variant;
  out.alpha = w.alpha;
  out.r_choice = w.choice;
  out.states = form.size();
  return out;
}

}  // namespace

RateWeight default_weight(const SymmetricForm& form, double alpha) {
  const int n = form.size();
  const Vector rate = form.kernel().rowwise().sum().cwiseQuotient(form.measure());
  RateWeight w;
  w.alpha = alpha;
  w.r = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) w.r(i, j) = rate(i) + rate(j);
    }
  }
  return w;
}

void check_admissible(const SymmetricForm& form, const RateWeight& w) {
  const int n = form.size();
  if (w.r.rows() != n || w.r.cols() != n) {
    throw DomainError(kModule, "rate weight dimensions differ from the form");
  }
  if (!(w.alpha >= 0.0)) throw DomainError(kModule, "alpha must be nonnegative");
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (w.r(i, j) < 0.0 || w.r(i, j) != w.r(j, i)) {
        throw DomainError(kModule, "rate weight must be symmetric and nonnegative");
      }
      if (i != j && w.r(i, j) > 0.0) row += form.kernel()(i, j) / w.r(i, j);
    }
    if (row / form.measure()(i) > 1.0 + kAdmissibleSlack) {
      throw DomainError(kModule, "rate weight is not admissible at state " + std::to_string(i) +
                                     ": J^(1)(x,E)/pi(x) = " + std::to_string(row / form.measure()(i)));
    }
  }
}

SymmetricForm j_alpha(const SymmetricForm& form, const RateWeight& w) {
  check_admissible(form, w);
  if (w.alpha == 0.0) return form;
  const int n = form.size();
  Matrix k = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && w.r(i, j) > 0.0) k(i, j) = form.kernel()(i, j) / std::pow(w.r(i, j), w.alpha);
    }
  }
  return SymmetricForm(form.measure(), std::move(k));
}

std::string variant_name(const CheegerVariant& v) {
  switch (v.kind) {
    case VariantKind::Poincare:
      return "poincare";
    case VariantKind::Nash:
      return "nash";
    case VariantKind::LogSobolevWang:
      return "logsob_wang";
    case VariantKind::LogSobolevChen:
      return "logsob_chen";
  }
  return "unknown";
}

VariantKind parse_variant(const std::string& name) {
  if (name == "poincare") return VariantKind::Poincare;
  if (name == "nash") return VariantKind::Nash;
  if (name == "logsob_wang") return VariantKind::LogSobolevWang;
  if (name == "logsob_chen") return VariantKind::LogSobolevChen;
  throw DomainError(kModule, "unknown Cheeger variant '" + name + "'");
}

std::string CheegerResult::argmin_string() const {
  std::string s(states, '0');
  for (int i = 0; i < states; ++i) {
    if ((argmin_subset >> i) & 1U) s[i] = '1';
  }
  return s;
}

CheegerResult cheeger_constant(const SymmetricForm& form, const CheegerVariant& variant,
                               const RateWeight& w) {
  check_variant(variant);
  if (form.size() > kMaxEnumerationStates) {
    throw DomainError(kModule, "exhaustive enumeration limited to n <= " +
                                   std::to_string(kMaxEnumerationStates) +
                                   "; sampling mode is not supported");
  }
  const SymmetricForm weighted = j_alpha(form, w);
  VariantAccumulator acc(variant, form.size(), form.measure().minCoeff());
  for_each_subset(weighted.kernel(), weighted.measure(),
                  [&](std::uint64_t mask, double boundary, double mass) {
                    acc.visit(mask, boundary, mass);
                  });
  CheegerResult out = make_result(form, variant, w);
  acc.finish(out);
  return out;
}

CheegerResult cheeger_nested_upper_bound(const SymmetricForm& form, const CheegerVariant& variant,
                                         const RateWeight& w) {
  check_variant(variant);
  const int n = form.size();
  if (n > 64) throw DomainError(kModule, "nested-subset heuristic limited to n <= 64");
  const SymmetricForm weighted = j_alpha(form, w);
  const Matrix& k = weighted.kernel();
  const Vector& pi = weighted.measure();
  VariantAccumulator acc(variant, n, pi.minCoeff());

  auto visit_range = [&](int lo, int hi) {  // A = {lo, .., hi - 1}
    std::uint64_t mask = 0;
    double mass = 0.0;
    for (int i = lo; i < hi; ++i) {
      mask |= std::uint64_t{1} << i;
      mass += pi(i);
    }
    double boundary = 0.0;
    for (int i = lo; i < hi; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j < lo || j >= hi) boundary += k(i, j);
      }
    }
    acc.visit(mask, boundary, std::min(mass, 1.0));
  };
  for (int len = 1; len < n; ++len) {
    visit_range(0, len);
    visit_range(n - len, n);
  }
  // Single states carry the small-measure shells.
  for (int i = 1; i + 1 < n; ++i) visit_range(i, i + 1);
  visit_range(0, n);

  CheegerResult out = make_result(form, variant, w);
  out.exhaustive = false;
  acc.finish(out);
  return out;
}

LawlerSokal lawler_sokal_bound(const ReversibleChain& chain) {
  const int n = chain.size();
  if (n > kMaxEnumerationStates) {
    throw DomainError(kModule, "Lawler-Sokal enumeration limited to n <= " +
                                   std::to_string(kMaxEnumerationStates));
  }
  const Vector& pi = chain.stationary();
  Matrix flux = pi.asDiagonal() * chain.rates();
  flux.diagonal().setZero();

  LawlerSokal out;
  out.k = kInf;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for_each_subset(flux, pi, [&](std::uint64_t mask, double boundary, double mass) {
    if (mask == full) return;
    const double q = boundary / std::min(mass, 1.0 - mass);
    if (q < out.k) {
      out.k = q;
      out.argmin_subset = mask;
    }
  });
  out.max_rate = chain.max_exit_rate();
  out.bound = out.k * out.k / (2.0 * out.max_rate);
  return out;
}

DscBound dsc_log_sobolev_bound(const ReversibleChain& chain) {
  std::string offending;
  for (int i = 0; i < chain.size(); ++i) {
    const double activity = chain.rates().row(i).cwiseAbs().sum();
    if (std::abs(activity - 1.0) > kRowActivityTolerance) {
      offending += (offending.empty() ? "" : ",") + std::to_string(i);
    }
  }
  if (!offending.empty()) {
    throw DomainError(kModule, "sum_j |q_ij| must equal 1 on every row; offending rows: " +
                                   offending);
  }
  DscBound out;
  out.min_measure = chain.stationary().minCoeff();
  out.spectral_gap = forms::spectral_gap_exact(chain);
  const double p = out.min_measure;
  if (std::abs(p - 0.5) <= 1e-12) {
    // 2(1 - 2p) / log(1/p - 1) -> 1 as p -> 1/2.
    out.limit_used = true;
    out.value = out.spectral_gap;
  } else {
    out.value = 2.0 * (1.0 - 2.0 * p) * out.spectral_gap / std::log(1.0 / p - 1.0);
  }
  return out;
}

TheoremReport main_theorem_check(const SymmetricForm& form, const RateWeight& w,
                                 const TheoremOptions& options) {
  if (form.size() > kMaxEnumerationStates) {
    throw DomainError(kModule, "theorem check limited to n <= " +
                                   std::to_string(kMaxEnumerationStates));
  }
  RateWeight half = w;
  half.alpha = 0.5;

  TheoremReport report;
  report.r_choice = w.choice;
  report.nash_q = options.nash_q.value_or(1.0 + options.nu / 2.0);
  report.nash_p = options.nash_p.value_or(report.nash_q / (report.nash_q - 1.0));

  const std::vector<VariantKind> kinds = {VariantKind::Poincare, VariantKind::Nash,
                                          VariantKind::LogSobolevWang,
                                          VariantKind::LogSobolevChen};
  for (const auto kind : kinds) {
    CheegerVariant v;
    v.kind = kind;
    v.nu = options.nu;
    v.delta_grid = options.delta_grid;
    report.constants.push_back(cheeger_constant(form, v, half));
  }

  report.spectral_gap = forms::spectral_gap_exact(form);
  report.nash_constant = forms::nash_minimal_constant(form, report.nash_p, report.nash_q,
                                                      options.nash_samples, options.seed)
                             .value;
  report.log_sobolev = forms::log_sobolev_constant(form, options.log_sobolev).value;

  auto add = [&](const CheegerResult& c, std::string name, double constant) {
    InequalityStatus s;
    s.variant = variant_name(c.variant);
    s.k_half = c.value;
    s.cheeger_positive = c.value > 0.0;
    s.constant_name = std::move(name);
    s.constant = constant;
    s.holds = std::isfinite(constant) && constant >= 0.0;
    report.checks.push_back(std::move(s));
  };
  add(report.constants[0], "1/lambda_1", 1.0 / report.spectral_gap);
  add(report.constants[1], "nash_C", report.nash_constant);
  add(report.constants[2], "1/sigma", 1.0 / report.log_sobolev);
  add(report.constants[3], "1/sigma", 1.0 / report.log_sobolev);

  report.all_hold = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const InequalityStatus& s) {
                                  return s.cheeger_positive && s.holds;
                                });
  return report;
}

}  // namespace specgap::cheeger
