#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "ilcsos/poly.hpp"
#include "ilcsos/synthesis.hpp"

namespace ilcsos {

inline constexpr int kMaxTimeDomainN = 8;

// p_1(lambda) q^-1 + ... + p_N(lambda) q^-N over a simplex.
struct LiftedUncertainPlant {
  int N = 0;
  std::vector<std::string> lambda_vars;
  std::vector<AffinePoly> markov;  // p_1 .. p_N

  int n_lambda() const { return static_cast<int>(lambda_vars.size()); }
  // Length, variables, decision-freeness, and p_1 bounded away from zero on
  // vertices plus a dense sample.
  void validate() const;
  std::vector<double> markov_at(std::span<const double> lambda) const;
  Eigen::MatrixXd lifted_at(std::span<const double> lambda) const;
};

// Full Toeplitz filter, entry (i, j) = c_(i-j); values[t] holds c_(t-(N-1)).
struct LiftedFilter {
  int N = 0;
  std::vector<double> values;
  std::vector<bool> free;

  void validate() const;
  static LiftedFilter identity(int N);
  static LiftedFilter zero(int N);
  // All coefficients free; when causal, c_-1 .. c_-(N-1) are pinned to 0.
  static LiftedFilter decision(int N, bool causal);
  Eigen::MatrixXd matrix() const;
  Eigen::MatrixXd matrix(std::span<const double> coeffs) const;
};

// Lower-triangular Toeplitz of Markov parameters.
PolyMatrix build_lifted_plant(const std::vector<AffinePoly>& markov, int N);
Eigen::MatrixXd lifted_toeplitz(const std::vector<double>& markov);

struct TimeSynthesisProblem {
  LiftedUncertainPlant plant;
  LiftedFilter qfilter;
  LiftedFilter lfilter;
  PolyaOptions options;
};

struct TimeDecisions {
  DecisionSpace space;
  int eta = 0;
  std::vector<int> l_ids;  // -1 where pinned
};

TimeDecisions make_time_decisions(const TimeSynthesisProblem& problem);

// Decision entries become affine coefficients.
PolyMatrix build_filter_matrix(const LiftedFilter& filter, const std::vector<int>& ids,
                               const std::vector<std::string>& vars);

// hom([[eta a^2 I, W^T], [W, I]]) with W = P Q (I - L P) adj(P), a = det(P).
PolyMatrix build_M(const TimeSynthesisProblem& problem, const TimeDecisions& dec);

// (M(lambda^2) - eps |lambda|^(2 deg M) I) |lambda|^(2k).
PolyMatrix time_sos_matrix(const PolyMatrix& M, const std::vector<std::string>& lambda_vars, double epsilon, int k);

SynthesisResult synth_time(const TimeSynthesisProblem& problem);

}  // namespace ilcsos
