#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ilcsos/poly.hpp"
#include "ilcsos/simplex.hpp"
#include "ilcsos/synthesis.hpp"
#include "ilcsos/transforms.hpp"

namespace ilcsos {

// P(z, lambda) = sum_i num[i] z^i / sum_i den[i] z^i with coefficients
// polynomial in the simplex variables (none for a point plant).
struct UncertainTransferFunction {
  std::vector<std::string> lambda_vars;
  std::vector<AffinePoly> num;  // ascending powers of z
  std::vector<AffinePoly> den;  // ascending powers of z, leading term included

  int num_degree() const { return static_cast<int>(num.size()) - 1; }
  int den_degree() const { return static_cast<int>(den.size()) - 1; }
  int n_lambda() const { return static_cast<int>(lambda_vars.size()); }
  // Throws InvalidProblem when improper, decision-carrying or inconsistent.
  void validate() const;
  ZLaurent num_z() const;
  ZLaurent den_z() const;
  // Numeric coefficients at one lambda (ascending powers).
  std::vector<double> num_at(std::span<const double> lambda) const;
  std::vector<double> den_at(std::span<const double> lambda) const;
  std::complex<double> evaluate(std::complex<double> z, std::span<const double> lambda) const;
  // Point plant at one lambda.
  UncertainTransferFunction freeze(std::span<const double> lambda) const;
};

// Plant with coefficients polynomial in theta over the polytope conv(vertices).
struct ThetaTransferFunction {
  std::vector<std::string> theta_vars;
  std::vector<AffinePoly> num;
  std::vector<AffinePoly> den;
  std::vector<std::vector<double>> vertices;
};

// theta = sum_i lambda_i v_i, then joint sign flip so the leading denominator
// coefficient is positive at the simplex barycenter.
UncertainTransferFunction simplexify(const ThetaTransferFunction& plant,
                                     const std::string& lambda_prefix = "lam");

// sum_t c_t z^(lead - t), t = 0 .. lead + lag.
struct NoncausalFir {
  int lead = 0;
  int lag = 0;
  std::vector<double> values;  // fixed values (ignored where free)
  std::vector<bool> free;

  int size() const { return lead + lag + 1; }
  int power(int t) const { return lead - t; }
  void validate() const;
  std::complex<double> evaluate(std::complex<double> z, std::span<const double> coeffs) const;
  std::complex<double> evaluate(std::complex<double> z) const { return evaluate(z, values); }

  static NoncausalFir fixed(std::vector<double> values, int lead = 0);
  static NoncausalFir decision(int lead, int lag);
  static NoncausalFir unit() { return fixed({1.0}); }
};

struct FirBound {
  int index = 0;  // coefficient position t
  double lo = 0.0;
  double hi = 0.0;
};

struct FreqSynthesisProblem {
  UncertainTransferFunction plant;
  NoncausalFir qfilter = NoncausalFir::unit();
  NoncausalFir lfilter = NoncausalFir::decision(0, 0);
  PolyaOptions options;
  // Bounds on decision coefficients of either filter.
  std::vector<FirBound> q_bounds;
  std::vector<FirBound> l_bounds;
};

// Decision variables of a frequency-domain program.
struct FreqDecisions {
  DecisionSpace space;
  int eta = 0;
  std::vector<int> q_ids;  // -1 where fixed
  std::vector<int> l_ids;
};

FreqDecisions make_freq_decisions(const FreqSynthesisProblem& problem);
ZLaurent fir_laurent(const NoncausalFir& f, const std::vector<int>& ids, const std::vector<std::string>& vars);
// Q(z) [D(z) - z L(z) N(z)] / D(z).
ZRational learning_factor(const FreqSynthesisProblem& problem, const FreqDecisions& dec);

struct JuryReport {
  bool stable = false;
  double worst_margin = 0.0;
  std::vector<double> worst_lambda;
  int samples = 0;
};

// Jury margin of one polynomial (ascending coefficients): positive iff every
// root lies strictly inside the unit circle.
double jury_margin(const std::vector<double>& coeffs);
JuryReport jury_stability(const UncertainTransferFunction& plant, const std::vector<SimplexPoint>& samples);
// Vertices plus a lattice of the given resolution.
JuryReport jury_stability(const UncertainTransferFunction& plant, int grid_steps = 50);

// tau_1 + j tau_2 over tau_3 for a point plant (variables: "x").
RationalizedForm tau_decompose(const FreqSynthesisProblem& problem, const FreqDecisions& dec);

SynthesisResult synth_freq_nominal(const FreqSynthesisProblem& problem);

struct THat {
  PolyMatrix matrix;     // over ["x"] + lambda vars
  int x_degree = 0;      // total (x1, x2) degree cleared by (1+x^2)
  int lambda_degree = 0; // common lambda degree after homogenization
};
THat build_T_hat(const FreqSynthesisProblem& problem, const FreqDecisions& dec);
// The SOS matrix at Polya exponent k.
PolyMatrix robust_sos_matrix(const THat& t, const std::vector<std::string>& lambda_vars, double epsilon, int k);

SynthesisResult synth_freq_robust(const FreqSynthesisProblem& problem);

struct AlternationRound {
  bool optimized_q = false;
  SynthesisResult result;
  std::vector<double> q_values;
  std::vector<double> l_values;
};

// Round 1 optimizes L with Q fixed, round 2 optimizes Q with L fixed, and so
// on. Each round starts from the previous round's filters.
std::vector<AlternationRound> alternate_LQ(const FreqSynthesisProblem& problem, int rounds);

// Sampled sup over the default grids at the given numeric filters; used to
// size the bisection bracket.
double quick_gamma_freq(const UncertainTransferFunction& plant, const NoncausalFir& q, const NoncausalFir& l);

}  // namespace ilcsos
