#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ilcsos/affine.hpp"
#include "ilcsos/sdp.hpp"
#include "ilcsos/sos.hpp"

namespace ilcsos {

// Polya escalation and positivity margin shared by both domains.
struct PolyaOptions {
  double epsilon = 1e-3;
  int k_min = 0;
  int k_max = 5;
  double k_tol = 1e-3;
  // Run exactly k = k_min (no escalation).
  bool fixed_k = false;
  SdpOptions sdp;
  // Upper end of the eta bracket for the bisection fallback; <= 0 disables it.
  double bisection_hi = 0.0;
};

struct SynthesisResult {
  double gamma = 0.0;
  double eta = 0.0;
  std::vector<std::string> gain_names;
  std::vector<double> gains;
  int k_used = 0;
  std::vector<int> k_values;
  std::vector<double> eta_per_k;
  double certificate_residual = 0.0;
  double certificate_scale = 0.0;
  double certificate_min_eigenvalue = 0.0;
  bool certificate_pass = false;
  // gamma* >= 1: no monotone convergence certified.
  bool not_monotone = false;
  bool infeasible_all_k = false;
  // eta*_k rose by more than the solver tolerance between consecutive k.
  bool k_trend_violation = false;
  SdpSolution solver;
  int gram_dim = 0;
  int num_equalities = 0;
  std::vector<std::string> diagnostics;
};

// Builds the SOS constraint for a given Polya exponent k.
using ConstraintBuilder = std::function<SosConstraint(int k)>;

struct SynthesisSetup {
  DecisionSpace space;
  int eta = 0;                  // id of eta in space
  std::vector<int> gains;       // ids reported as gains
  std::vector<LinearInequality> inequalities;
};

// Minimizes eta subject to the constraint for k = k_min, k_min+1, ... until
// |eta_k - eta_{k-1}| < k_tol or k = k_max. Throws SolverFailure when no k
// gives an optimal solve.
SynthesisResult polya_synthesize(const SynthesisSetup& setup, const ConstraintBuilder& build,
                                 const PolyaOptions& options);

}  // namespace ilcsos
