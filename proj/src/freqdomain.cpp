#include "ilcsos/freqdomain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ilcsos/errors.hpp"

namespace ilcsos {

namespace {

std::complex<double> horner(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

std::vector<double> eval_all(const std::vector<AffinePoly>& ps, std::span<const double> lambda) {
  std::vector<double> out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.push_back(p.evaluate(lambda));
  return out;
}

AffinePoly compose_theta(const AffinePoly& p, const std::vector<AffinePoly>& theta, const std::vector<std::string>& lvars) {
  AffinePoly out(lvars);
  for (const auto& [e, c] : p.terms()) {
    AffinePoly term = AffinePoly::constant(lvars, c);
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] > 0) term = term * theta[j].pow(e[j]);
    }
    out += term;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Plant

void UncertainTransferFunction::validate() const {
  if (den.empty()) throw InvalidProblem("transfer function needs a denominator");
  if (num.empty()) throw InvalidProblem("transfer function needs a numerator");
  if (num_degree() > den_degree()) throw InvalidProblem("transfer function must be proper");
  for (const auto* list : {&num, &den}) {
    for (const auto& p : *list) {
      if (p.variables() != lambda_vars) throw VariableMismatch("plant coefficient variables differ from the simplex variables");
      if (p.has_decision()) throw InvalidProblem("plant coefficients must be decision-free");
    }
  }
  if (den.back().is_zero()) throw InvalidProblem("leading denominator coefficient is zero");
}

ZLaurent UncertainTransferFunction::num_z() const { return ZLaurent::polynomial(lambda_vars, num); }
ZLaurent UncertainTransferFunction::den_z() const { return ZLaurent::polynomial(lambda_vars, den); }

std::vector<double> UncertainTransferFunction::num_at(std::span<const double> lambda) const { return eval_all(num, lambda); }
std::vector<double> UncertainTransferFunction::den_at(std::span<const double> lambda) const { return eval_all(den, lambda); }

std::complex<double> UncertainTransferFunction::evaluate(std::complex<double> z, std::span<const double> lambda) const {
  return horner(num_at(lambda), z) / horner(den_at(lambda), z);
}

UncertainTransferFunction UncertainTransferFunction::freeze(std::span<const double> lambda) const {
  UncertainTransferFunction out;
  for (double v : num_at(lambda)) out.num.push_back(AffinePoly::constant({}, v));
  for (double v : den_at(lambda)) out.den.push_back(AffinePoly::constant({}, v));
  return out;
}

UncertainTransferFunction simplexify(const ThetaTransferFunction& plant, const std::string& lambda_prefix) {
  if (plant.vertices.empty()) throw EmptyPolytope("uncertainty polytope has no vertices");
  const std::size_t dim = plant.theta_vars.size();
  for (const auto& v : plant.vertices) {
    if (v.size() != dim) throw DimensionMismatch("polytope vertex dimension differs from the parameter count");
  }
  const std::size_t s = plant.vertices.size();
  UncertainTransferFunction out;
  for (std::size_t i = 0; i < s; ++i) out.lambda_vars.push_back(lambda_prefix + std::to_string(i + 1));

  std::vector<AffinePoly> theta;
  for (std::size_t j = 0; j < dim; ++j) {
    AffinePoly t(out.lambda_vars);
    for (std::size_t i = 0; i < s; ++i) {
      Exponent e(s, 0);
      e[i] = 1;
      t.add_term(e, plant.vertices[i][j]);
    }
    theta.push_back(t);
  }
  for (const auto& p : plant.num) {
    if (p.variables() != plant.theta_vars) throw VariableMismatch("plant coefficient variables differ from the parameter list");
    out.num.push_back(compose_theta(p, theta, out.lambda_vars));
  }
  for (const auto& p : plant.den) {
    if (p.variables() != plant.theta_vars) throw VariableMismatch("plant coefficient variables differ from the parameter list");
    out.den.push_back(compose_theta(p, theta, out.lambda_vars));
  }
  if (out.den.empty()) throw InvalidProblem("transfer function needs a denominator");
  const std::vector<double> bary(s, 1.0 / static_cast<double>(s));
  const double lead = out.den.back().evaluate(bary);
  if (lead == 0.0) throw InvalidProblem("leading denominator coefficient vanishes at the barycenter");
  if (lead < 0.0) {
    for (auto& p : out.num) p = -p;
    for (auto& p : out.den) p = -p;
  }
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Filters

void NoncausalFir::validate() const {
  if (lead < 0 || lag < 0) throw InvalidProblem("filter orders must be nonnegative");
  if (static_cast<int>(values.size()) != size() || static_cast<int>(free.size()) != size()) {
    throw InvalidProblem("filter coefficient count does not match its orders");
  }
}

std::complex<double> NoncausalFir::evaluate(std::complex<double> z, std::span<const double> coeffs) const {
  if (static_cast<int>(coeffs.size()) != size()) throw DimensionMismatch("filter coefficient count mismatch");
  std::complex<double> v = 0.0;
  for (int t = 0; t < size(); ++t) v += coeffs[static_cast<std::size_t>(t)] * std::pow(z, power(t));
  return v;
}

NoncausalFir NoncausalFir::fixed(std::vector<double> values, int lead) {
  NoncausalFir f;
  f.lead = lead;
  f.lag = static_cast<int>(values.size()) - 1 - lead;
  f.free.assign(values.size(), false);
  f.values = std::move(values);
  f.validate();
  return f;
}

NoncausalFir NoncausalFir::decision(int lead, int lag) {
  NoncausalFir f;
  f.lead = lead;
  f.lag = lag;
  f.values.assign(static_cast<std::size_t>(lead + lag + 1), 0.0);
  f.free.assign(static_cast<std::size_t>(lead + lag + 1), true);
  f.validate();
  return f;
}

FreqDecisions make_freq_decisions(const FreqSynthesisProblem& problem) {
  problem.qfilter.validate();
  problem.lfilter.validate();
  const bool q_free = std::any_of(problem.qfilter.free.begin(), problem.qfilter.free.end(), [](bool b) { return b; });
  const bool l_free = std::any_of(problem.lfilter.free.begin(), problem.lfilter.free.end(), [](bool b) { return b; });
  if (q_free && l_free) throw InvalidProblem("Q and L cannot both carry decision variables (bilinear)");
  FreqDecisions d;
  d.eta = d.space.add("eta");
  auto name = [](char prefix, int idx) { return std::string(1, prefix) + std::to_string(idx); };
  for (int t = 0; t < problem.qfilter.size(); ++t) {
    d.q_ids.push_back(problem.qfilter.free[static_cast<std::size_t>(t)] ? d.space.add(name('q', t - problem.qfilter.lead)) : -1);
  }
  for (int t = 0; t < problem.lfilter.size(); ++t) {
    d.l_ids.push_back(problem.lfilter.free[static_cast<std::size_t>(t)] ? d.space.add(name('l', t - problem.lfilter.lead)) : -1);
  }
  return d;
}

ZLaurent fir_laurent(const NoncausalFir& f, const std::vector<int>& ids, const std::vector<std::string>& vars) {
  ZLaurent out(vars);
  for (int t = 0; t < f.size(); ++t) {
    const int id = ids[static_cast<std::size_t>(t)];
    const AffineCoeff c = id >= 0 ? AffineCoeff::variable(id) : AffineCoeff(f.values[static_cast<std::size_t>(t)]);
    out.add(f.power(t), AffinePoly::constant(vars, c));
  }
  return out;
}

ZRational learning_factor(const FreqSynthesisProblem& problem, const FreqDecisions& dec) {
  const auto& plant = problem.plant;
  plant.validate();
  const auto& vars = plant.lambda_vars;
  const ZLaurent q = fir_laurent(problem.qfilter, dec.q_ids, vars);
  const ZLaurent l = fir_laurent(problem.lfilter, dec.l_ids, vars);
  const ZLaurent z = ZLaurent::monomial(vars, 1, 1.0);
  const ZLaurent n = plant.num_z();
  const ZLaurent d = plant.den_z();
  return {q * (d - z * l * n), d};
}

// ---------------------------------------------------------------------------
// Jury

double jury_margin(const std::vector<double>& coeffs) {
  std::vector<double> c = coeffs;
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.empty()) return -std::numeric_limits<double>::infinity();
  const std::size_t n = c.size() - 1;
  if (n == 0) return std::numeric_limits<double>::infinity();
  const double lead = c.back();
  for (auto& v : c) v /= lead;
  if (n == 1) return 1.0 - std::abs(c[0]);
  if (n == 2) return std::min(1.0 - std::abs(c[0]), 1.0 + c[0] - std::abs(c[1]));
  // Jury table rows: each step removes one degree through the reflection
  // coefficient c0 / cn of the current row.
  double margin = std::numeric_limits<double>::infinity();
  while (c.size() > 1) {
    const std::size_t m = c.size() - 1;
    const double k = c[0] / c[m];
    margin = std::min(margin, 1.0 - std::abs(k));
    if (std::abs(k) >= 1.0) return margin;
    std::vector<double> r(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = c[m] * c[i + 1] - c[0] * c[m - 1 - i];
    const double rl = r.back();
    for (auto& v : r) v /= rl;
    c = std::move(r);
  }
  return margin;
}

JuryReport jury_stability(const UncertainTransferFunction& plant, const std::vector<SimplexPoint>& samples) {
  JuryReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const double m = jury_margin(plant.den_at(s));
    ++rep.samples;
    if (m < rep.worst_margin) {
      rep.worst_margin = m;
      rep.worst_lambda = s;
    }
  }
  rep.stable = rep.samples > 0 && rep.worst_margin > 0.0;
  return rep;
}

JuryReport jury_stability(const UncertainTransferFunction& plant, int grid_steps) {
  if (plant.n_lambda() == 0) return jury_stability(plant, std::vector<SimplexPoint>{SimplexPoint{}});
  auto pts = simplex_vertices(plant.n_lambda());
  for (auto& p : simplex_lattice(plant.n_lambda(), grid_steps)) pts.push_back(std::move(p));
  return jury_stability(plant, pts);
}

// ---------------------------------------------------------------------------
// Synthesis

namespace {

SynthesisSetup make_setup(const FreqSynthesisProblem& problem, const FreqDecisions& dec) {
  SynthesisSetup setup;
  setup.space = dec.space;
  setup.eta = dec.eta;
  for (int id : dec.q_ids) {
    if (id >= 0) setup.gains.push_back(id);
  }
  for (int id : dec.l_ids) {
    if (id >= 0) setup.gains.push_back(id);
  }
  auto add_bounds = [&](const std::vector<FirBound>& bounds, const std::vector<int>& ids) {
    for (const auto& b : bounds) {
      if (b.index < 0 || b.index >= static_cast<int>(ids.size()) || ids[static_cast<std::size_t>(b.index)] < 0) {
        throw InvalidProblem("bound on a filter coefficient that is not a decision variable");
      }
      if (b.lo > b.hi) throw InvalidProblem("empty coefficient bound");
      const int id = ids[static_cast<std::size_t>(b.index)];
      setup.inequalities.push_back({AffineCoeff::variable(id) - AffineCoeff(b.lo)});
      setup.inequalities.push_back({AffineCoeff(b.hi) - AffineCoeff::variable(id)});
    }
  };
  add_bounds(problem.q_bounds, dec.q_ids);
  add_bounds(problem.l_bounds, dec.l_ids);
  return setup;
}

std::vector<double> current_values(const NoncausalFir& f) { return f.values; }

PolyaOptions with_bracket(const FreqSynthesisProblem& problem) {
  PolyaOptions opts = problem.options;
  if (opts.bisection_hi <= 0.0) {
    NoncausalFir l0 = problem.lfilter;
    std::fill(l0.values.begin(), l0.values.end(), 0.0);
    for (int t = 0; t < l0.size(); ++t) {
      if (!problem.lfilter.free[static_cast<std::size_t>(t)]) l0.values[static_cast<std::size_t>(t)] = problem.lfilter.values[static_cast<std::size_t>(t)];
    }
    NoncausalFir q = problem.qfilter;
    const double g0 = quick_gamma_freq(problem.plant, q, l0);
    opts.bisection_hi = std::max(4.0 * g0 * g0, 1.0);
  }
  return opts;
}

void fill_filters(const FreqSynthesisProblem& problem, const FreqDecisions& dec, const SynthesisResult& res,
                  std::vector<double>& q, std::vector<double>& l) {
  q = current_values(problem.qfilter);
  l = current_values(problem.lfilter);
  const auto& vals = res.solver.scalar_values;
  for (std::size_t t = 0; t < dec.q_ids.size(); ++t) {
    if (dec.q_ids[t] >= 0) q[t] = vals[static_cast<std::size_t>(dec.q_ids[t])];
  }
  for (std::size_t t = 0; t < dec.l_ids.size(); ++t) {
    if (dec.l_ids[t] >= 0) l[t] = vals[static_cast<std::size_t>(dec.l_ids[t])];
  }
}

}  // namespace

RationalizedForm tau_decompose(const FreqSynthesisProblem& problem, const FreqDecisions& dec) {
  if (problem.plant.n_lambda() != 0) throw InvalidProblem("nominal decomposition needs a point plant");
  return circle_rationalize_single(learning_factor(problem, dec), "x");
}

SynthesisResult synth_freq_nominal(const FreqSynthesisProblem& problem) {
  const FreqDecisions dec = make_freq_decisions(problem);
  const RationalizedForm tau = tau_decompose(problem, dec);
  const auto& vars = tau.den.variables();
  const double eps = problem.options.epsilon;
  if (!(eps > 0.0)) throw InvalidProblem("epsilon must be positive");

  PolyMatrix S(3, 3, vars);
  const AffinePoly t3sq = tau.den * tau.den;
  const AffinePoly eta = AffinePoly::constant(vars, AffineCoeff::variable(dec.eta));
  S(0, 0) = eta * t3sq - eps * t3sq;
  S(0, 1) = tau.num.re;
  S(1, 0) = tau.num.re;
  S(0, 2) = tau.num.im;
  S(2, 0) = tau.num.im;
  S(1, 1) = AffinePoly::constant(vars, 1.0);
  S(2, 2) = AffinePoly::constant(vars, 1.0);

  PolyaOptions opts = with_bracket(problem);
  opts.fixed_k = true;
  opts.k_min = 0;
  const SynthesisSetup setup = make_setup(problem, dec);
  return polya_synthesize(setup, [&](int) { return SosConstraint{S, {}, true}; }, opts);
}

THat build_T_hat(const FreqSynthesisProblem& problem, const FreqDecisions& dec) {
  const auto& lvars = problem.plant.lambda_vars;
  const RationalizedForm nu = circle_rationalize_xy(learning_factor(problem, dec), "x1", "x2");
  const auto& vars = nu.den.variables();
  PolyMatrix T(3, 3, vars);
  const AffinePoly eta = AffinePoly::constant(vars, AffineCoeff::variable(dec.eta));
  T(0, 0) = eta * (nu.den * nu.den);
  T(0, 1) = nu.num.re;
  T(1, 0) = nu.num.re;
  T(0, 2) = nu.num.im;
  T(2, 0) = nu.num.im;
  T(1, 1) = AffinePoly::constant(vars, 1.0);
  T(2, 2) = AffinePoly::constant(vars, 1.0);

  THat out;
  if (!lvars.empty()) {
    T = homogenize(T, lvars);
    AffinePoly probe(vars);
    out.lambda_degree = std::max(0, T.degree(probe.var_indices(lvars)));
  }
  out.matrix = x_parameterize(T, "x1", "x2", "x", &out.x_degree);
  return out;
}

PolyMatrix robust_sos_matrix(const THat& t, const std::vector<std::string>& lambda_vars, double epsilon, int k) {
  const auto& vars = t.matrix.variables();
  PolyMatrix S = lambda_vars.empty() ? t.matrix : substitute_squares(t.matrix, lambda_vars);
  AffinePoly margin = AffinePoly::constant(vars, epsilon);
  {
    AffinePoly one_plus_x2 = AffinePoly::constant(vars, 1.0);
    Exponent e(vars.size(), 0);
    e[static_cast<std::size_t>(one_plus_x2.var_index("x"))] = 2;
    one_plus_x2.add_term(e, 1.0);
    margin = margin * one_plus_x2.pow(t.x_degree);
  }
  if (!lambda_vars.empty()) margin = margin * squared_norm_power(vars, lambda_vars, t.lambda_degree);
  for (int i = 0; i < S.rows(); ++i) S(i, i) -= margin;
  if (k > 0 && !lambda_vars.empty()) S = squared_norm_power(vars, lambda_vars, k) * S;
  return S;
}

SynthesisResult synth_freq_robust(const FreqSynthesisProblem& problem) {
  problem.plant.validate();
  const JuryReport jury = jury_stability(problem.plant);
  if (!jury.stable) throw InvalidProblem("plant is not robustly stable over the simplex (Jury check failed)");
  const FreqDecisions dec = make_freq_decisions(problem);
  const THat that = build_T_hat(problem, dec);
  const auto& lvars = problem.plant.lambda_vars;
  PolyaOptions opts = with_bracket(problem);
  if (lvars.empty()) opts.fixed_k = true;
  std::vector<std::vector<std::string>> groups{{"x"}};
  if (!lvars.empty()) groups.push_back(lvars);
  const SynthesisSetup setup = make_setup(problem, dec);
  return polya_synthesize(
      setup, [&](int k) { return SosConstraint{robust_sos_matrix(that, lvars, opts.epsilon, k), groups, true}; }, opts);
}

std::vector<AlternationRound> alternate_LQ(const FreqSynthesisProblem& problem, int rounds) {
  if (rounds < 1) throw InvalidProblem("alternation needs at least one round");
  std::vector<AlternationRound> trace;
  std::vector<double> q = problem.qfilter.values;
  std::vector<double> l = problem.lfilter.values;
  for (int r = 0; r < rounds; ++r) {
    FreqSynthesisProblem step = problem;
    const bool opt_q = r % 2 == 1;
    step.qfilter.values = q;
    step.lfilter.values = l;
    if (opt_q) {
      std::fill(step.lfilter.free.begin(), step.lfilter.free.end(), false);
      step.l_bounds.clear();
    } else {
      std::fill(step.qfilter.free.begin(), step.qfilter.free.end(), false);
      step.q_bounds.clear();
    }
    AlternationRound round;
    round.optimized_q = opt_q;
    round.result = synth_freq_robust(step);
    const FreqDecisions dec = make_freq_decisions(step);
    fill_filters(step, dec, round.result, q, l);
    round.q_values = q;
    round.l_values = l;
    trace.push_back(std::move(round));
  }
  return trace;
}

double quick_gamma_freq(const UncertainTransferFunction& plant, const NoncausalFir& q, const NoncausalFir& l) {
  std::vector<SimplexPoint> pts;
  if (plant.n_lambda() == 0) {
    pts.push_back({});
  } else {
    pts = simplex_vertices(plant.n_lambda());
    for (auto& p : simplex_edge_grid(plant.n_lambda(), 10)) pts.push_back(std::move(p));
  }
  constexpr int kOmega = 256;
  double g = 0.0;
  for (const auto& p : pts) {
    const auto num = plant.num_at(p);
    const auto den = plant.den_at(p);
    for (int k = 0; k < kOmega; ++k) {
      const auto z = std::polar(1.0, 2.0 * std::numbers::pi * k / kOmega);
      const auto f = q.evaluate(z) * (1.0 - z * l.evaluate(z) * horner(num, z) / horner(den, z));
      g = std::max(g, std::abs(f));
    }
  }
  return g;
}

}  // namespace ilcsos
