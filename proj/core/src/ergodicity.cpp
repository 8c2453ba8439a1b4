#include "specgap/ergodicity.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>

#include "specgap/errors.hpp"
#include "specgap/expression.hpp"

namespace specgap::ergodicity {
namespace {

constexpr char kModule[] = "ergodicity";
constexpr double kNegativeClamp = 1e-9;
constexpr double kCurveFloor = 1e-14;
constexpr double kDecayRelativeSlack = 1e-8;
constexpr double kDecayAbsoluteSlack = 1e-13;

void check_times(std::span<const double> times) {
  if (times.empty()) throw DomainError(kModule, "time grid is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw DomainError(kModule, "times must be nonnegative and strictly increasing");
    }
  }
}

}  // namespace

Semigroup::Semigroup(const ReversibleChain& chain)
    : rates_(chain.rates()),
      spectral_(std::sqrt(chain.stationary().maxCoeff() / chain.stationary().minCoeff()) <=
                kSpectralConditionLimit),
      pi_(chain.stationary()) {
  const auto dec = forms::spectral_decomposition(forms::SymmetricForm::from_chain(chain));
  sqrt_pi_ = dec.sqrt_measure;
  eigenvalues_ = dec.eigenvalues;
  eigenvectors_ = dec.eigenvectors;
  // The stationary mode is known in closed form.
  eigenvalues_(0) = 0.0;
  eigenvectors_.col(0) = sqrt_pi_;
}

Matrix Semigroup::exponential(double t) const {
  const Matrix scaled = t * rates_;
  Matrix p = scaled.exp();
  // Rows sum to one up to rounding; renormalise after clamping.
  p = p.cwiseMax(0.0);
  return p.array().colwise() / p.rowwise().sum().array();
}

Matrix Semigroup::deviation(double t) const {
  if (!(t >= 0.0)) throw DomainError(kModule, "time must be nonnegative");
  if (!spectral_) {
    Matrix p = t == 0.0 ? Matrix::Identity(pi_.size(), pi_.size()) : exponential(t);
    return p.rowwise() - pi_.transpose();
  }
  const int n = static_cast<int>(pi_.size());
  const auto tail = eigenvectors_.rightCols(n - 1);
  const Vector decay = (-t * eigenvalues_.tail(n - 1)).array().exp();
  const Matrix sym = tail * decay.asDiagonal() * tail.transpose();
  return sqrt_pi_.cwiseInverse().asDiagonal() * sym * sqrt_pi_.asDiagonal();
}

Matrix Semigroup::at(double t) const {
  if (!spectral_) {
    if (!(t >= 0.0)) throw DomainError(kModule, "time must be nonnegative");
    return t == 0.0 ? Matrix::Identity(pi_.size(), pi_.size()) : exponential(t);
  }
  Matrix p = deviation(t);
  p.rowwise() += pi_.transpose();
  if (t == 0.0) return Matrix::Identity(p.rows(), p.cols());
  if (p.minCoeff() < -kNegativeClamp) {
    throw ConvergenceError(kModule, "semigroup has materially negative entries", p.minCoeff());
  }
  return p.cwiseMax(0.0);
}

Vector Semigroup::apply(double t, const Vector& f) const {
  if (!(t >= 0.0)) throw DomainError(kModule, "time must be nonnegative");
  if (f.size() != pi_.size()) throw DomainError(kModule, "function length differs from state count");
  if (!spectral_) return at(t) * f;
  const Vector coeffs = eigenvectors_.transpose() * sqrt_pi_.cwiseProduct(f);
  const Vector decayed = coeffs.cwiseProduct((-t * eigenvalues_).array().exp().matrix());
  return (eigenvectors_ * decayed).cwiseQuotient(sqrt_pi_);
}

Matrix semigroup_matrix(const ReversibleChain& chain, double t) {
  if (!(t >= 0.0)) throw DomainError(kModule, "time must be nonnegative");
  return Semigroup(chain).at(t);
}

VarianceDecay variance_decay_check(const ReversibleChain& chain, const Vector& f,
                                   std::span<const double> times) {
  check_times(times);
  const Semigroup semigroup(chain);
  const Vector& pi = chain.stationary();
  VarianceDecay out;
  out.spectral_gap = semigroup.spectral_gap();
  out.curve.quantity = Quantity::Variance;
  out.curve.times.assign(times.begin(), times.end());

  const double var0 = forms::variance(pi, f);
  const double floor = kDecayAbsoluteSlack * pi.dot(f.cwiseAbs2());
  out.pass = true;
  for (const double t : times) {
    const double v = forms::variance(pi, semigroup.apply(t, f));
    const double bound = var0 * std::exp(-2.0 * out.spectral_gap * t);
    out.curve.values.push_back(v);
    out.envelope.push_back(bound);
    if (v > bound * (1.0 + kDecayRelativeSlack) + floor) out.pass = false;
  }
  return out;
}

std::optional<ExponentialFit> fit_exponential_tail(const DecayCurve& curve) {
  const std::size_t m = curve.times.size();
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  int count = 0;
  for (std::size_t k = m / 2; k < m; ++k) {
    if (!(curve.values[k] > kCurveFloor)) continue;
    const double t = curve.times[k];
    const double y = -std::log(curve.values[k]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++count;
  }
  if (count < 2) return std::nullopt;
  const double denom = count * stt - st * st;
  if (!(denom > 0.0)) return std::nullopt;
  const double slope = (count * sty - st * sy) / denom;
  const double intercept = (sy - slope * st) / count;
  return ExponentialFit{slope, std::exp(-intercept)};
}

TvDecay tv_decay(const ReversibleChain& chain, std::span<const double> times) {
  check_times(times);
  const Semigroup semigroup(chain);
  const int n = chain.size();
  TvDecay out;
  out.per_state.resize(n);
  for (int x = 0; x < n; ++x) {
    out.per_state[x].quantity = Quantity::TvAtState;
    out.per_state[x].state = x;
    out.per_state[x].times.assign(times.begin(), times.end());
  }
  out.sup.quantity = Quantity::TvSup;
  out.sup.times.assign(times.begin(), times.end());

  for (const double t : times) {
    const Matrix dev = semigroup.deviation(t);
    double worst = 0.0;
    for (int x = 0; x < n; ++x) {
      // At t = 0 the deviation is exactly delta_x - pi.
      const double tv = t == 0.0 ? 2.0 * (1.0 - chain.stationary()(x)) : dev.row(x).cwiseAbs().sum();
      out.per_state[x].values.push_back(tv);
      worst = std::max(worst, tv);
    }
    out.sup.values.push_back(worst);
  }

  if (auto fit = fit_exponential_tail(out.sup)) out.fitted_rate = fit->rate;
  for (const auto& curve : out.per_state) out.per_state_fit.push_back(fit_exponential_tail(curve));
  return out;
}

double evaluate_v(const VSpec& v, const ReversibleChain& chain, const Vector& f) {
  switch (v.kind) {
    case VFunctional::CenteredLr:
      return forms::centered_lr_norm_sq(chain.stationary(), f, v.r);
    case VFunctional::Lipschitz:
      return forms::lipschitz_sq(f, v.metric ? *v.metric : forms::graph_distance(chain));
    case VFunctional::Variance:
      return forms::variance(chain.stationary(), f);
  }
  return 0.0;
}

AlgebraicDecay algebraic_decay_check(const ReversibleChain& chain, const VSpec& v, double q,
                                     std::span<const Vector> functions,
                                     std::span<const double> times) {
  if (!(q > 1.0)) throw DomainError(kModule, "algebraic decay exponent q must exceed 1");
  check_times(times);
  VSpec resolved = v;
  if (v.kind == VFunctional::Lipschitz && !v.metric) resolved.metric = forms::graph_distance(chain);

  const Semigroup semigroup(chain);
  const Vector& pi = chain.stationary();
  AlgebraicDecay out;
  for (const auto& f : functions) {
    const double vf = evaluate_v(resolved, chain, f);
    const double floor = 1e-14 * std::max(pi.dot(f.cwiseAbs2()), 1e-300);
    for (const double t : times) {
      const Vector pf = semigroup.apply(t, f);
      const double vpf = evaluate_v(resolved, chain, pf);
      if (vf > 0.0) {
        out.worst_premise_ratio = std::max(out.worst_premise_ratio, vpf / vf);
        if (vpf > vf * (1.0 + 1e-10)) out.premise_holds = false;
      } else if (vpf > floor) {
        out.premise_holds = false;
      }
      if (t <= 0.0) continue;
      const double var = forms::variance(pi, pf);
      if (vf > 0.0) {
        out.constant = std::max(out.constant, var * std::pow(t, q - 1.0) / vf);
      } else if (var > floor) {
        out.infinite = true;
      }
    }
  }
  if (out.infinite) out.constant = std::numeric_limits<double>::infinity();
  return out;
}

TruncationFamily birth_death_family(const std::string& birth_expr, const std::string& death_expr,
                                    std::vector<int> sizes) {
  const Expression birth = Expression::parse(birth_expr);
  const Expression death = Expression::parse(death_expr);
  TruncationFamily family;
  family.name = "birth-death b=" + birth_expr + " a=" + death_expr;
  family.sizes = std::move(sizes);
  family.generator = [birth, death](int n) {
    if (n < 2) throw DomainError(kModule, "truncation size must be at least 2");
    std::vector<double> b(n - 1), a(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
      b[i] = birth(i);
      a[i] = death(i + 1);
    }
    return forms::birth_death_chain(b, a);
  };
  return family;
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::DecayingToZero:
      return "decaying-to-zero";
    case Trend::BoundedBelow:
      return "bounded-below";
    case Trend::Undetermined:
      return "undetermined";
  }
  return "undetermined";
}

Trend classify_trend(std::span<const double> values) {
  if (values.size() < 2) return Trend::Undetermined;
  bool monotone = true;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[k - 1] + 1e-9 * std::abs(values[k - 1])) monotone = false;
  }
  return (monotone && values.back() < 0.25 * values.front()) ? Trend::DecayingToZero
                                                             : Trend::BoundedBelow;
}

Trend ProbeReport::trend_of(const std::string& quantity) const {
  for (const auto& t : trends) {
    if (t.quantity == quantity) return t.trend;
  }
  return Trend::Undetermined;
}

ProbeReport diagram_probe(const TruncationFamily& family, const ProbeOptions& options) {
  ProbeReport report;
  report.family = family.name;

  for (const int n : family.sizes) {
    ProbeRow row;
    row.size = n;
    try {
      if (n > 64) throw DomainError(kModule, "probe sizes are limited to 64 states");
      const ReversibleChain chain = family.generator(n);
      const auto form = forms::SymmetricForm::from_chain(chain);
      row.spectral_gap = forms::spectral_gap_exact(form);
      row.log_sobolev = forms::log_sobolev_constant(form, options.log_sobolev).value;
      const double nash_q = 1.0 + options.nu / 2.0;
      row.nash_constant = forms::nash_minimal_constant(form, nash_q / (nash_q - 1.0), nash_q,
                                                       options.nash_samples, options.seed)
                              .value;

      std::vector<double> times(options.time_points);
      const double horizon = options.horizon_gap_multiples / row.spectral_gap;
      for (int k = 0; k < options.time_points; ++k) {
        times[k] = horizon * k / (options.time_points - 1);
      }
      row.tv_rate = tv_decay(chain, times).fitted_rate;

      const auto weight = cheeger::default_weight(form, 0.5);
      row.cheeger_exhaustive = n <= options.enumeration_limit;
      auto constant = [&](cheeger::VariantKind kind) {
        cheeger::CheegerVariant v;
        v.kind = kind;
        v.nu = options.nu;
        return row.cheeger_exhaustive ? cheeger::cheeger_constant(form, v, weight).value
                                      : cheeger::cheeger_nested_upper_bound(form, v, weight).value;
      };
      row.k_poincare = constant(cheeger::VariantKind::Poincare);
      row.k_nash = constant(cheeger::VariantKind::Nash);
      row.k_wang = constant(cheeger::VariantKind::LogSobolevWang);
      row.k_chen = constant(cheeger::VariantKind::LogSobolevChen);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }

  auto series = [&](auto field) {
    std::vector<double> v;
    for (const auto& r : report.rows) {
      if (!r.error) v.push_back(field(r));
    }
    return v;
  };
  auto add = [&](const std::string& name, const std::vector<double>& v) {
    report.trends.push_back({name, classify_trend(v)});
  };
  add("spectral_gap", series([](const ProbeRow& r) { return r.spectral_gap; }));
  add("log_sobolev", series([](const ProbeRow& r) { return r.log_sobolev; }));
  add("nash_inverse_constant", series([](const ProbeRow& r) { return 1.0 / r.nash_constant; }));
  add("tv_rate", series([](const ProbeRow& r) { return r.tv_rate.value_or(0.0); }));
  add("k_poincare", series([](const ProbeRow& r) { return r.k_poincare; }));
  add("k_nash", series([](const ProbeRow& r) { return r.k_nash; }));
  add("k_logsob_wang", series([](const ProbeRow& r) { return r.k_wang; }));
  add("k_logsob_chen", series([](const ProbeRow& r) { return r.k_chen; }));

  const Trend gap = report.trend_of("spectral_gap");
  const Trend tv = report.trend_of("tv_rate");
  report.poincare_exponential_consistent = gap != Trend::Undetermined && gap == tv;
  const Trend nash = report.trend_of("nash_inverse_constant");
  report.nash_implication_consistent =
      nash != Trend::BoundedBelow ||
      (report.trend_of("log_sobolev") == Trend::BoundedBelow && tv == Trend::BoundedBelow);
  return report;
}

}  // namespace specgap::ergodicity
