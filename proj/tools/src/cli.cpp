#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "specgap/chain_io.hpp"
#include "specgap/cheeger.hpp"
#include "specgap/ergodicity.hpp"
#include "specgap/errors.hpp"
#include "specgap/forms.hpp"
#include "specgap/geometry.hpp"
#include "specgap/report.hpp"

namespace specgap::cli {
namespace {

using report::ReportRow;
using report::Table;

constexpr char kModule[] = "cli";

constexpr char kUsage[] =
    "usage: specgap <verb> [options]\n"
    "verbs:\n"
    "  geom     eigenvalue lower bounds from dimension, diameter and curvature\n"
    "  chain    spectral gap, log-Sobolev constant, Dirichlet form of a chain\n"
    "  cheeger  Cheeger-type constants, Lawler-Sokal and DSC bounds, theorem report\n"
    "  ergodic  variance and total-variation decay, algebraic decay constant\n"
    "  probe    trends over a birth-death truncation family\n"
    "run 'specgap <verb> --help' for the options of a verb\n";

struct Options {
  std::string format = "tsv";
  std::string out;
  std::string input;
  std::string inline_json;
  std::string op;
  std::uint64_t seed = 20240601;
  std::optional<double> tol;

  double d = 0.0, diameter = 0.0, curvature = 0.0;
  bool have_d = false;
  std::string f_family;

  double alpha = 0.5;
  std::string variant = "all";
  double nu = 4.0;
  std::string delta_grid;

  std::string times;
  std::string sizes;
  std::string f;
  std::string v = "var";
  double r = 2.0;
  double q = 2.0;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first == std::string::npos) throw DomainError(kModule, std::string(flag) + ": empty list item");
    item = item.substr(first, last - first + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw DomainError(kModule, std::string(flag) + ": not a number '" + item + "'");
    }
    out.push_back(value);
    pos = end + 1;
  }
  return out;
}

std::string read_input(const Options& o) {
  if (!o.inline_json.empty() && !o.input.empty()) {
    throw DomainError(kModule, "give either --inline or --input, not both");
  }
  if (!o.inline_json.empty()) return o.inline_json;
  if (o.input.empty()) throw DomainError(kModule, "this verb needs --inline JSON or --input FILE");
  std::ifstream file(o.input, std::ios::binary);
  if (!file) throw DomainError(kModule, "cannot open input file '" + o.input + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

forms::Vector function_arg(const Options& o, int n, const forms::SymmetricForm& form) {
  if (o.f.empty()) return forms::gap_eigenfunction(form);
  const auto values = parse_list(o.f, "--f");
  if (static_cast<int>(values.size()) != n) {
    throw DomainError(kModule, "--f has " + std::to_string(values.size()) + " entries, chain has " +
                                   std::to_string(n) + " states");
  }
  return Eigen::Map<const forms::Vector>(values.data(), n);
}

std::vector<double> time_grid(const Options& o, double gap) {
  if (!o.times.empty()) return parse_list(o.times, "--times");
  constexpr int kPoints = 33;
  std::vector<double> t(kPoints);
  for (int k = 0; k < kPoints; ++k) t[k] = 8.0 / gap * k / (kPoints - 1);
  return t;
}

ReportRow row(std::string section, std::string name, std::optional<double> value,
              std::string detail = {}) {
  ReportRow r;
  r.section = std::move(section);
  r.name = std::move(name);
  r.value = value;
  r.detail = std::move(detail);
  return r;
}

std::string padded(int k, int width = 4) {
  std::string s = std::to_string(k);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

// geom

geometry::QuadratureSpec quad_spec(const Options& o) {
  geometry::QuadratureSpec q;
  if (o.tol) q.relative_tolerance = *o.tol;
  geometry::validate(q);
  return q;
}

geometry::TestFunction named_test_function(const std::string& name,
                                           const geometry::GeometryParams& p) {
  if (name == "constant") return geometry::constant_one();
  if (name == "sine_beta") return geometry::sine_beta(p);
  if (name == "sine_curvature") return geometry::sine_curvature(p);
  if (name == "damped_sine_beta") return geometry::damped_sine_beta(p);
  throw DomainError(kModule, "unknown --f-family '" + name +
                                 "' (constant, sine_beta, sine_curvature, damped_sine_beta)");
}

Table run_geom(const Options& o) {
  if (!o.have_d) throw DomainError(kModule, "geom needs --d, --D and --K");
  const geometry::GeometryParams p{static_cast<int>(o.d), o.diameter, o.curvature};
  if (o.d != std::floor(o.d)) throw DomainError("geometry", "dimension must be an integer");
  geometry::validate(p);
  const auto quad = quad_spec(o);
  const std::string op = o.op.empty() ? "table" : o.op;
  std::vector<ReportRow> rows;

  if (op == "table") {
    const auto table = geometry::bounds_table(p, quad);
    const auto exact = geometry::known_eigenvalue(p);
    for (const auto& b : table.rows) {
      ReportRow r = row("bound", std::string(geometry::to_string(b.id)), b.value,
                        b.error ? *b.error : b.condition);
      r.applicable = b.applicable;
      if (exact && b.value) r.sharp = std::abs(*b.value - *exact) <= 1e-9 * *exact;
      if (b.id == geometry::BoundId::GF && table.best_test_function) {
        r.detail = "best test function " + *table.best_test_function;
      }
      rows.push_back(std::move(r));
    }
    for (const auto& c : table.dominance) {
      ReportRow r = row("dominance",
                        std::string(geometry::to_string(c.stronger)) + ">=" +
                            std::string(geometry::to_string(c.weaker)),
                        std::nullopt, c.evaluated ? "" : "not evaluated");
      if (c.evaluated) r.dominance_ok = c.ok;
      rows.push_back(std::move(r));
    }
    if (exact) rows.push_back(row("reference", "lambda1", *exact, "exact eigenvalue"));
  } else if (op == "general") {
    const auto f = named_test_function(o.f_family.empty() ? "sine_beta" : o.f_family, p);
    const auto g = geometry::general_lower_bound(p, f, quad);
    rows.push_back(row("general", "value", g.value, f.family_id));
    rows.push_back(row("general", "argmin_r", g.argmin_r));
  } else if (op == "family") {
    const std::string family = o.f_family.empty() ? "corollary" : o.f_family;
    geometry::FamilyOptimum best;
    if (family == "corollary") {
      const auto members = geometry::corollary_test_functions(p);
      best = geometry::optimize_over_family(p, members, quad);
    } else if (family == "sine") {
      const double hi = std::acos(-1.0) / p.diameter;
      best = geometry::optimize_over_family(p, geometry::sine_family(1e-3 * hi, hi), quad);
    } else {
      throw DomainError(kModule, "unknown family '" + family + "' (corollary, sine)");
    }
    rows.push_back(row("family", "bound", best.bound, best.best.family_id));
    rows.push_back(row("family", "evaluations", best.evaluations));
    rows.push_back(row("family", "rejected", best.rejected));
  } else {
    throw DomainError(kModule, "unknown geom --op '" + op + "' (table, general, family)");
  }
  return report::to_table(std::move(rows));
}

// chain

forms::LogSobolevOptions ls_options(const Options& o) {
  forms::LogSobolevOptions ls;
  ls.seed = o.seed;
  if (o.tol) ls.gradient_tolerance = *o.tol;
  return ls;
}

Table run_chain(const Options& o) {
  const auto chain = io::parse_chain(read_input(o));
  const auto form = forms::SymmetricForm::from_chain(chain);
  const std::string op = o.op.empty() ? "all" : o.op;
  const bool all = op == "all";
  if (!all && op != "gap" && op != "sigma" && op != "dirichlet" && op != "stationary") {
    throw DomainError(kModule, "unknown chain --op '" + op + "' (gap, sigma, dirichlet, stationary, all)");
  }
  std::vector<ReportRow> rows;
  if (all || op == "gap") rows.push_back(row("chain", "gap", forms::spectral_gap_exact(form)));
  if (all || op == "sigma") {
    const auto ls = forms::log_sobolev_constant(form, ls_options(o));
    ReportRow r = row("chain", "sigma", ls.value,
                      ls.limit_attained ? "near-constant limit" : "interior minimiser");
    r.converged = ls.converged_starts > 0;
    rows.push_back(std::move(r));
  }
  if (all || op == "dirichlet") {
    const auto f = function_arg(o, chain.size(), form);
    rows.push_back(row("chain", "dirichlet", forms::dirichlet_form(form, f)));
    rows.push_back(row("chain", "variance", forms::variance(chain.stationary(), f)));
  }
  if (all || op == "stationary") {
    for (int i = 0; i < chain.size(); ++i) {
      rows.push_back(row("stationary", "pi" + padded(i), chain.stationary()(i)));
    }
  }
  return report::to_table(std::move(rows));
}

// cheeger

std::vector<cheeger::CheegerVariant> variants(const Options& o) {
  std::vector<std::string> names;
  if (o.variant == "all") {
    names = {"poincare", "nash", "logsob_wang", "logsob_chen"};
  } else {
    names = {o.variant};
  }
  std::vector<cheeger::CheegerVariant> out;
  for (const auto& name : names) {
    cheeger::CheegerVariant v;
    v.kind = cheeger::parse_variant(name);
    v.nu = o.nu;
    if (!o.delta_grid.empty()) v.delta_grid = parse_list(o.delta_grid, "--delta-grid");
    out.push_back(v);
  }
  return out;
}

Table run_cheeger(const Options& o) {
  const auto chain = io::parse_chain(read_input(o));
  const auto form = forms::SymmetricForm::from_chain(chain);
  const std::string op = o.op.empty() ? "constants" : o.op;

  if (op == "constants") {
    const auto weight = cheeger::default_weight(form, o.alpha);
    std::vector<cheeger::CheegerResult> results;
    for (const auto& v : variants(o)) results.push_back(cheeger::cheeger_constant(form, v, weight));
    return report::cheeger_table(results);
  }
  std::vector<ReportRow> rows;
  if (op == "lawler_sokal") {
    const auto ls = cheeger::lawler_sokal_bound(chain);
    rows.push_back(row("lawler_sokal", "k", ls.k));
    rows.push_back(row("lawler_sokal", "max_rate", ls.max_rate));
    rows.push_back(row("lawler_sokal", "bound", ls.bound));
    rows.push_back(row("lawler_sokal", "gap", forms::spectral_gap_exact(form)));
  } else if (op == "dsc") {
    const auto dsc = cheeger::dsc_log_sobolev_bound(chain);
    rows.push_back(row("dsc", "bound", dsc.value, dsc.limit_used ? "limit at pi_* = 1/2" : ""));
    rows.push_back(row("dsc", "min_measure", dsc.min_measure));
    rows.push_back(row("dsc", "gap", dsc.spectral_gap));
    const auto sigma = forms::log_sobolev_constant(form, ls_options(o));
    rows.push_back(row("dsc", "sigma", sigma.value));
  } else if (op == "theorem") {
    cheeger::TheoremOptions t;
    t.nu = o.nu;
    t.seed = o.seed;
    t.log_sobolev = ls_options(o);
    if (!o.delta_grid.empty()) t.delta_grid = parse_list(o.delta_grid, "--delta-grid");
    const auto rep = cheeger::main_theorem_check(form, cheeger::default_weight(form, 0.5), t);
    for (const auto& c : rep.constants) {
      ReportRow r = row("k_half", cheeger::variant_name(c.variant), c.value, c.argmin_string());
      r.converged = c.converged;
      rows.push_back(std::move(r));
    }
    for (const auto& s : rep.checks) {
      ReportRow r = row("inequality", s.variant, s.constant,
                        s.constant_name + (s.holds && s.cheeger_positive ? " holds" : " fails"));
      r.applicable = s.cheeger_positive;
      rows.push_back(std::move(r));
    }
    rows.push_back(row("theorem", "all_hold", std::nullopt, rep.all_hold ? "true" : "false"));
    rows.push_back(row("theorem", "r_choice", std::nullopt, rep.r_choice));
    rows.push_back(row("theorem", "nash_p", rep.nash_p));
    rows.push_back(row("theorem", "nash_q", rep.nash_q));
  } else {
    throw DomainError(kModule,
                      "unknown cheeger --op '" + op + "' (constants, lawler_sokal, dsc, theorem)");
  }
  return report::to_table(std::move(rows));
}

// ergodic

Table curve_table(const std::vector<const ergodicity::DecayCurve*>& curves,
                  const std::vector<double>* envelope) {
  Table t;
  t.columns = {"quantity", "state", "time", "value", "bound"};
  for (const auto* c : curves) {
    const std::string name = c->quantity == ergodicity::Quantity::Variance ? "variance"
                             : c->quantity == ergodicity::Quantity::TvSup  ? "tv_sup"
                                                                           : "tv_at_state";
    for (std::size_t k = 0; k < c->times.size(); ++k) {
      t.rows.push_back({name, c->state >= 0 ? report::Cell{static_cast<double>(c->state)} : report::Cell{},
                        c->times[k], c->values[k],
                        envelope ? report::Cell{(*envelope)[k]} : report::Cell{}});
    }
  }
  return t;
}

Table run_ergodic(const Options& o) {
  const auto chain = io::parse_chain(read_input(o));
  const auto form = forms::SymmetricForm::from_chain(chain);
  const double gap = forms::spectral_gap_exact(form);
  const auto times = time_grid(o, gap);
  const std::string op = o.op.empty() ? "rate" : o.op;

  if (op == "variance") {
    const auto res = ergodicity::variance_decay_check(chain, function_arg(o, chain.size(), form), times);
    return curve_table({&res.curve}, &res.envelope);
  }
  if (op == "tv") {
    const auto res = ergodicity::tv_decay(chain, times);
    std::vector<const ergodicity::DecayCurve*> curves{&res.sup};
    for (const auto& c : res.per_state) curves.push_back(&c);
    return curve_table(curves, nullptr);
  }
  std::vector<ReportRow> rows;
  if (op == "rate") {
    const auto res = ergodicity::tv_decay(chain, times);
    ReportRow r = row("tv", "fitted_rate", res.fitted_rate,
                      res.fitted_rate ? "" : "not identifiable");
    r.converged = res.fitted_rate.has_value();
    rows.push_back(std::move(r));
    rows.push_back(row("tv", "gap", gap));
    rows.push_back(row("meta", "tv_norm", std::nullopt, ergodicity::TvDecay::kNorm));
    for (std::size_t x = 0; x < res.per_state_fit.size(); ++x) {
      const auto& fit = res.per_state_fit[x];
      rows.push_back(row("state_fit", "prefactor" + padded(static_cast<int>(x)),
                         fit ? std::optional<double>(fit->prefactor) : std::nullopt));
      rows.push_back(row("state_fit", "rate" + padded(static_cast<int>(x)),
                         fit ? std::optional<double>(fit->rate) : std::nullopt));
    }
    const auto var = ergodicity::variance_decay_check(chain, function_arg(o, chain.size(), form), times);
    ReportRow v = row("variance", "poincare_decay", std::nullopt, var.pass ? "pass" : "fail");
    v.applicable = var.pass;
    rows.push_back(std::move(v));
  } else if (op == "algebraic") {
    ergodicity::VSpec v;
    if (o.v == "var") {
      v.kind = ergodicity::VFunctional::Variance;
    } else if (o.v == "lr") {
      v.kind = ergodicity::VFunctional::CenteredLr;
      v.r = o.r;
    } else if (o.v == "lip") {
      v.kind = ergodicity::VFunctional::Lipschitz;
    } else {
      throw DomainError(kModule, "unknown --v '" + o.v + "' (var, lr, lip)");
    }
    const std::vector<forms::Vector> fs{function_arg(o, chain.size(), form)};
    const auto res = ergodicity::algebraic_decay_check(chain, v, o.q, fs, times);
    rows.push_back(row("algebraic", "constant", res.constant, res.infinite ? "V(f) = 0" : ""));
    ReportRow p = row("algebraic", "premise", res.worst_premise_ratio, "max V(P_t f) / V(f)");
    p.applicable = res.premise_holds;
    rows.push_back(std::move(p));
  } else {
    throw DomainError(kModule, "unknown ergodic --op '" + op + "' (rate, variance, tv, algebraic)");
  }
  return report::to_table(std::move(rows));
}

// probe

Table run_probe(const Options& o) {
  auto spec = io::parse_family(read_input(o));
  if (!o.sizes.empty()) {
    spec.sizes.clear();
    for (const double s : parse_list(o.sizes, "--sizes")) {
      if (s != std::floor(s) || s < 2) throw DomainError(kModule, "--sizes must be integers >= 2");
      spec.sizes.push_back(static_cast<int>(s));
    }
  }
  if (spec.sizes.empty()) throw DomainError(kModule, "probe needs sizes (JSON 'sizes' or --sizes)");
  const auto family = ergodicity::birth_death_family(spec.birth, spec.death, spec.sizes);
  ergodicity::ProbeOptions po;
  po.nu = o.nu;
  po.seed = o.seed;
  po.log_sobolev = ls_options(o);
  const auto rep = ergodicity::diagram_probe(family, po);

  std::vector<ReportRow> rows;
  for (const auto& r : rep.rows) {
    const std::string section = "n" + padded(r.size);
    if (r.error) {
      rows.push_back(row(section, "error", std::nullopt, *r.error));
      continue;
    }
    rows.push_back(row(section, "spectral_gap", r.spectral_gap));
    rows.push_back(row(section, "log_sobolev", r.log_sobolev));
    rows.push_back(row(section, "nash_constant", r.nash_constant));
    rows.push_back(row(section, "tv_rate", r.tv_rate, r.tv_rate ? "" : "not identifiable"));
    const std::string how = r.cheeger_exhaustive ? "exhaustive" : "nested-subset upper bound";
    rows.push_back(row(section, "k_poincare", r.k_poincare, how));
    rows.push_back(row(section, "k_nash", r.k_nash, how));
    rows.push_back(row(section, "k_logsob_wang", r.k_wang, how));
    rows.push_back(row(section, "k_logsob_chen", r.k_chen, how));
  }
  for (const auto& t : rep.trends) {
    rows.push_back(row("trend", t.quantity, std::nullopt, ergodicity::to_string(t.trend)));
  }
  rows.push_back(row("meta", "family", std::nullopt, rep.family));
  rows.push_back(row("meta", "trend_rule", std::nullopt, rep.trend_rule));
  rows.push_back(row("meta", "poincare_exponential_consistent", std::nullopt,
                     rep.poincare_exponential_consistent ? "true" : "false"));
  rows.push_back(row("meta", "nash_implication_consistent", std::nullopt,
                     rep.nash_implication_consistent ? "true" : "false"));
  return report::to_table(std::move(rows));
}

void add_common(CLI::App& app, Options& o) {
  app.add_option("--format", o.format, "output format: tsv or json")->capture_default_str();
  app.add_option("--out", o.out, "write the report to this path instead of stdout");
  app.add_option("--seed", o.seed, "seed for multi-start optimisers and sampled sweeps")
      ->capture_default_str();
}

void add_chain_input(CLI::App& app, Options& o) {
  app.add_option("--inline", o.inline_json, "chain JSON given on the command line");
  app.add_option("--input", o.input, "path of a chain JSON file");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> kVerbs = {"geom", "chain", "cheeger", "ergodic", "probe"};
  if (args.empty() || (args[0] == "--help" || args[0] == "-h")) {
    (args.empty() ? err : out) << kUsage;
    return args.empty() ? kExitUsage : kExitOk;
  }
  if (std::find(kVerbs.begin(), kVerbs.end(), args[0]) == kVerbs.end()) {
    err << "specgap: unknown verb '" << args[0] << "'\n" << kUsage;
    return kExitUsage;
  }

  Options o;
  CLI::App app{"specgap", "specgap"};
  app.require_subcommand(1);

  auto* geom = app.add_subcommand("geom", "eigenvalue lower bounds for a manifold class");
  add_common(*geom, o);
  geom->add_option("--d", o.d, "dimension (integer >= 1)");
  geom->add_option("--D", o.diameter, "diameter");
  geom->add_option("--K", o.curvature, "Ricci curvature lower bound");
  geom->add_option("--op", o.op, "table (default), general or family");
  geom->add_option("--f-family", o.f_family,
                   "general: constant, sine_beta (default), sine_curvature, damped_sine_beta; "
                   "family: corollary (default) or sine");
  geom->add_option("--tol", o.tol, "relative quadrature tolerance (default 1e-10)");

  auto* chain = app.add_subcommand("chain", "spectral gap, log-Sobolev constant, Dirichlet form");
  add_common(*chain, o);
  add_chain_input(*chain, o);
  chain->add_option("--op", o.op, "gap, sigma, dirichlet, stationary or all (default)");
  chain->add_option("--f", o.f, "comma-separated function values (default: gap eigenfunction)");
  chain->add_option("--tol", o.tol, "log-Sobolev gradient tolerance (default 1e-9)");

  auto* cheeger = app.add_subcommand("cheeger", "Cheeger-type constants and related bounds");
  add_common(*cheeger, o);
  add_chain_input(*cheeger, o);
  cheeger->add_option("--op", o.op, "constants (default), lawler_sokal, dsc or theorem");
  cheeger->add_option("--variant", o.variant, "poincare, nash, logsob_wang, logsob_chen or all")
      ->capture_default_str();
  cheeger->add_option("--alpha", o.alpha, "exponent of the rate weight")->capture_default_str();
  cheeger->add_option("--nu", o.nu, "Nash dimension (> 1)")->capture_default_str();
  cheeger->add_option("--delta-grid", o.delta_grid,
                      "comma-separated delta values for logsob_chen (default 1,10,100,1000,10000)");
  cheeger->add_option("--tol", o.tol, "log-Sobolev gradient tolerance (default 1e-9)");

  auto* ergodic = app.add_subcommand("ergodic", "decay of variance and total variation");
  add_common(*ergodic, o);
  add_chain_input(*ergodic, o);
  ergodic->add_option("--op", o.op, "rate (default), variance, tv or algebraic");
  ergodic->add_option("--times", o.times, "comma-separated times (default 33 points on [0, 8/gap])");
  ergodic->add_option("--f", o.f, "comma-separated function values (default: gap eigenfunction)");
  ergodic->add_option("--v", o.v, "algebraic functional: var, lr or lip")->capture_default_str();
  ergodic->add_option("--r", o.r, "exponent of the lr functional, in [1, 2]")->capture_default_str();
  ergodic->add_option("--q", o.q, "algebraic exponent q > 1")->capture_default_str();

  auto* probe = app.add_subcommand("probe", "trends over a birth-death truncation family");
  add_common(*probe, o);
  probe->add_option("--inline", o.inline_json, "family JSON {\"b\": expr, \"a\": expr, \"sizes\": [...]}");
  probe->add_option("--input", o.input, "path of a family JSON file");
  probe->add_option("--sizes", o.sizes, "comma-separated state counts, overriding the JSON");
  probe->add_option("--nu", o.nu, "Nash dimension (> 1)")->capture_default_str();
  probe->add_option("--tol", o.tol, "log-Sobolev gradient tolerance (default 1e-9)");

  std::vector<std::string> argv_store{"specgap"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.get_subcommands().front()->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "specgap: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    o.have_d = geom->count("--d") > 0 && geom->count("--D") > 0 && geom->count("--K") > 0;
    const auto format = report::parse_format(o.format);
    Table table;
    if (geom->parsed()) table = run_geom(o);
    if (chain->parsed()) table = run_chain(o);
    if (cheeger->parsed()) table = run_cheeger(o);
    if (ergodic->parsed()) table = run_ergodic(o);
    if (probe->parsed()) table = run_probe(o);
    const std::string text = report::emit(table, format);
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) throw DomainError(kModule, "cannot write '" + o.out + "'");
      file << text;
    }
  } catch (const DomainError& e) {
    err << e.what() << "\n";
    return kExitDomain;
  } catch (const ConvergenceError& e) {
    err << e.what() << " (best estimate " << report::format_number(e.best_estimate()) << ")\n";
    return kExitConvergence;
  }
  return kExitOk;
}

}  // namespace specgap::cli
