#include "ilcsos/timedomain.hpp"

#include <cmath>

#include "ilcsos/errors.hpp"
#include "ilcsos/simplex.hpp"
#include "ilcsos/transforms.hpp"

namespace ilcsos {

void LiftedUncertainPlant::validate() const {
  if (N < 1) throw InvalidProblem("trial length must be positive");
  if (static_cast<int>(markov.size()) != N) throw DimensionMismatch("Markov parameter count differs from the trial length");
  for (const auto& p : markov) {
    if (p.variables() != lambda_vars) throw VariableMismatch("Markov parameter variables differ from the simplex variables");
    if (p.has_decision()) throw InvalidProblem("Markov parameters must be decision-free");
  }
  std::vector<SimplexPoint> pts;
  if (lambda_vars.empty()) {
    pts.push_back({});
  } else {
    pts = simplex_vertices(n_lambda());
    for (auto& p : simplex_random(n_lambda(), 1000, 0x5eed)) pts.push_back(std::move(p));
    for (auto& p : simplex_edge_grid(n_lambda(), 50)) pts.push_back(std::move(p));
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (const auto& pt : pts) {
    const double v = markov.front().evaluate(pt);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    scale = std::max(scale, std::abs(v));
  }
  const double tol = 1e-9 * std::max(scale, 1e-300);
  if (!(lo > tol || hi < -tol)) throw SingularPlant("first Markov parameter is not bounded away from zero on the simplex");
}

std::vector<double> LiftedUncertainPlant::markov_at(std::span<const double> lambda) const {
  std::vector<double> out;
  for (const auto& p : markov) out.push_back(p.evaluate(lambda));
  return out;
}

Eigen::MatrixXd LiftedUncertainPlant::lifted_at(std::span<const double> lambda) const { return lifted_toeplitz(markov_at(lambda)); }

void LiftedFilter::validate() const {
  if (N < 1) throw InvalidProblem("trial length must be positive");
  if (static_cast<int>(values.size()) != 2 * N - 1 || static_cast<int>(free.size()) != 2 * N - 1) {
    throw DimensionMismatch("lifted filter needs 2N-1 coefficients");
  }
}

LiftedFilter LiftedFilter::zero(int N) {
  LiftedFilter f;
  f.N = N;
  f.values.assign(static_cast<std::size_t>(2 * N - 1), 0.0);
  f.free.assign(static_cast<std::size_t>(2 * N - 1), false);
  return f;
}

LiftedFilter LiftedFilter::identity(int N) {
  LiftedFilter f = zero(N);
  f.values[static_cast<std::size_t>(N - 1)] = 1.0;
  return f;
}

LiftedFilter LiftedFilter::decision(int N, bool causal) {
  LiftedFilter f = zero(N);
  for (int t = 0; t < 2 * N - 1; ++t) f.free[static_cast<std::size_t>(t)] = !causal || t >= N - 1;
  return f;
}

Eigen::MatrixXd LiftedFilter::matrix() const { return matrix(values); }

Eigen::MatrixXd LiftedFilter::matrix(std::span<const double> coeffs) const {
  if (static_cast<int>(coeffs.size()) != 2 * N - 1) throw DimensionMismatch("lifted filter needs 2N-1 coefficients");
  Eigen::MatrixXd m(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) m(i, j) = coeffs[static_cast<std::size_t>(i - j + N - 1)];
  }
  return m;
}

PolyMatrix build_lifted_plant(const std::vector<AffinePoly>& markov, int N) {
  if (static_cast<int>(markov.size()) != N || N < 1) throw DimensionMismatch("Markov parameter count differs from the trial length");
  const auto& vars = markov.front().variables();
  PolyMatrix P(N, N, vars);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j <= i; ++j) P.set(i, j, markov[static_cast<std::size_t>(i - j)]);
  }
  return P;
}

Eigen::MatrixXd lifted_toeplitz(const std::vector<double>& markov) {
  const auto N = static_cast<int>(markov.size());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j <= i; ++j) P(i, j) = markov[static_cast<std::size_t>(i - j)];
  }
  return P;
}

TimeDecisions make_time_decisions(const TimeSynthesisProblem& problem) {
  problem.lfilter.validate();
  problem.qfilter.validate();
  for (bool f : problem.qfilter.free) {
    if (f) throw InvalidProblem("the Q filter must be fixed in time-domain synthesis");
  }
  TimeDecisions d;
  d.eta = d.space.add("eta");
  const int N = problem.lfilter.N;
  for (int t = 0; t < 2 * N - 1; ++t) {
    d.l_ids.push_back(problem.lfilter.free[static_cast<std::size_t>(t)] ? d.space.add("l" + std::to_string(t - (N - 1))) : -1);
  }
  return d;
}

PolyMatrix build_filter_matrix(const LiftedFilter& filter, const std::vector<int>& ids, const std::vector<std::string>& vars) {
  filter.validate();
  const int N = filter.N;
  if (static_cast<int>(ids.size()) != 2 * N - 1) throw DimensionMismatch("filter id count mismatch");
  PolyMatrix m(N, N, vars);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const auto t = static_cast<std::size_t>(i - j + N - 1);
      const AffineCoeff c = ids[t] >= 0 ? AffineCoeff::variable(ids[t]) : AffineCoeff(filter.values[t]);
      m.set(i, j, AffinePoly::constant(vars, c));
    }
  }
  return m;
}

PolyMatrix build_M(const TimeSynthesisProblem& problem, const TimeDecisions& dec) {
  const auto& plant = problem.plant;
  const int N = plant.N;
  if (problem.qfilter.N != N || problem.lfilter.N != N) throw DimensionMismatch("filter length differs from the trial length");
  const auto& vars = plant.lambda_vars;
  const PolyMatrix P = build_lifted_plant(plant.markov, N);
  const PolyMatrix Q = build_filter_matrix(problem.qfilter, std::vector<int>(static_cast<std::size_t>(2 * N - 1), -1), vars);
  const PolyMatrix L = build_filter_matrix(problem.lfilter, dec.l_ids, vars);
  const ToeplitzDetAdj da = triangular_toeplitz_det_adj(P);
  const PolyMatrix I = PolyMatrix::identity(N, vars);
  const PolyMatrix W = ((P * Q) * (I - L * P)) * da.adj;
  const AffinePoly eta = AffinePoly::constant(vars, AffineCoeff::variable(dec.eta));
  const PolyMatrix corner = (eta * (da.det * da.det)) * I;
  PolyMatrix M = PolyMatrix::blocks(corner, W.transpose(), W, I);
  if (!M.is_symmetric()) throw InvalidProblem("assembled M is not symmetric");
  return vars.empty() ? M : homogenize(M, vars);
}

PolyMatrix time_sos_matrix(const PolyMatrix& M, const std::vector<std::string>& lambda_vars, double epsilon, int k) {
  const auto& vars = M.variables();
  if (lambda_vars.empty()) {
    PolyMatrix S = M;
    for (int i = 0; i < S.rows(); ++i) S(i, i) -= AffinePoly::constant(vars, epsilon);
    return S;
  }
  AffinePoly probe(vars);
  const int d = std::max(0, M.degree(probe.var_indices(lambda_vars)));
  PolyMatrix S = substitute_squares(M, lambda_vars);
  const AffinePoly margin = epsilon * squared_norm_power(vars, lambda_vars, d);
  for (int i = 0; i < S.rows(); ++i) S(i, i) -= margin;
  if (k > 0) S = squared_norm_power(vars, lambda_vars, k) * S;
  return S;
}

SynthesisResult synth_time(const TimeSynthesisProblem& problem) {
  if (problem.plant.N > kMaxTimeDomainN) {
    throw InvalidProblem("trial length above " + std::to_string(kMaxTimeDomainN) +
                         " is too large for the lifted program; use frequency-domain synthesis instead");
  }
  problem.plant.validate();
  const TimeDecisions dec = make_time_decisions(problem);
  const PolyMatrix M = build_M(problem, dec);
  const auto& lvars = problem.plant.lambda_vars;

  SynthesisSetup setup;
  setup.space = dec.space;
  setup.eta = dec.eta;
  for (int id : dec.l_ids) {
    if (id >= 0) setup.gains.push_back(id);
  }
  PolyaOptions opts = problem.options;
  if (lvars.empty()) opts.fixed_k = true;
  if (opts.bisection_hi <= 0.0) {
    // sigma_max of P Q P^-1 (L = 0) over the vertices.
    double g0 = 0.0;
    const auto pts = lvars.empty() ? std::vector<SimplexPoint>{SimplexPoint{}} : simplex_vertices(problem.plant.n_lambda());
    for (const auto& pt : pts) {
      const Eigen::MatrixXd P = problem.plant.lifted_at(pt);
      const Eigen::MatrixXd E = P * problem.qfilter.matrix() * P.inverse();
      g0 = std::max(g0, Eigen::JacobiSVD<Eigen::MatrixXd>(E).singularValues()(0));
    }
    opts.bisection_hi = std::max(4.0 * g0 * g0, 1.0);
  }
  return polya_synthesize(setup, [&](int k) { return SosConstraint{time_sos_matrix(M, lvars, opts.epsilon, k), {}, true}; },
                          opts);
}

}  // namespace ilcsos
