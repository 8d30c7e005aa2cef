#include "ilcsos/synthesis.hpp"

#include <cmath>
#include <sstream>

#include "ilcsos/errors.hpp"

namespace ilcsos {

namespace {

struct Attempt {
  SdpSolution solution;
  CompiledSos compiled;
  SosConstraint constraint;
};

}  // namespace

SynthesisResult polya_synthesize(const SynthesisSetup& setup, const ConstraintBuilder& build,
                                 const PolyaOptions& options) {
  if (!(options.epsilon > 0.0)) throw InvalidProblem("epsilon must be positive");
  if (options.k_min < 0 || options.k_max < options.k_min) throw InvalidProblem("invalid Polya exponent range");

  SynthesisResult res;
  for (int id : setup.gains) res.gain_names.push_back(setup.space.name(id));

  std::optional<Attempt> best;
  int best_k = -1;
  double prev_eta = std::numeric_limits<double>::quiet_NaN();
  const int k_last = options.fixed_k ? options.k_min : options.k_max;
  bool any_failure = false;
  std::string last_failure;

  for (int k = options.k_min; k <= k_last; ++k) {
    SosProgram prog;
    prog.space = &setup.space;
    prog.constraints.push_back(build(k));
    prog.inequalities = setup.inequalities;
    prog.objective = AffineCoeff::variable(setup.eta);
    CompiledSos compiled = compile_sos(prog);

    SdpOptions sdp_opts = options.sdp;
    if (options.bisection_hi > 0.0) sdp_opts.bisection = BisectionSpec{setup.eta, 0.0, options.bisection_hi, 1e-5};
    SdpSolution sol = solve(compiled.sdp, sdp_opts);

    std::ostringstream msg;
    msg << "k=" << k << ": " << to_string(sol.status) << ", gram blocks " << compiled.sdp.block_dims.size()
        << ", equalities " << compiled.sdp.equalities.size() << ", iterations " << sol.iterations;
    if (sol.status != SdpStatus::optimal) {
      any_failure = true;
      last_failure = msg.str();
      res.diagnostics.push_back(msg.str());
      continue;
    }
    const double eta = sol.scalar_values[static_cast<std::size_t>(setup.eta)];
    msg << ", eta " << eta;
    res.diagnostics.push_back(msg.str());
    res.k_values.push_back(k);
    res.eta_per_k.push_back(eta);

    if (!std::isnan(prev_eta) && eta > prev_eta + 1e-6) {
      res.k_trend_violation = true;
      res.diagnostics.push_back("eta increased with k (solver tolerance exceeded)");
    }
    const bool converged = !std::isnan(prev_eta) && std::abs(eta - prev_eta) < options.k_tol;
    // Keep the smallest eta seen; larger k only adds freedom.
    if (!best || eta < best->solution.scalar_values[static_cast<std::size_t>(setup.eta)]) {
      best = Attempt{std::move(sol), std::move(compiled), prog.constraints.front()};
      best_k = k;
    }
    prev_eta = eta;
    if (converged) break;
  }

  if (!best) {
    throw SolverFailure("no Polya exponent produced an optimal SDP solution (" + last_failure + ")");
  }
  (void)any_failure;

  const auto& sol = best->solution;
  res.solver = sol;
  res.k_used = best_k;
  res.eta = sol.scalar_values[static_cast<std::size_t>(setup.eta)];
  res.gamma = std::sqrt(std::max(0.0, res.eta));
  for (int id : setup.gains) res.gains.push_back(sol.scalar_values[static_cast<std::size_t>(id)]);
  for (int d : best->compiled.sdp.block_dims) res.gram_dim += d;
  res.num_equalities = static_cast<int>(best->compiled.sdp.equalities.size());

  const SosCertificate cert = extract_certificate(best->compiled, sol, 0);
  const CertificateReport rep = check_certificate(best->constraint, sol.scalar_values, cert);
  res.certificate_residual = rep.residual;
  res.certificate_scale = rep.scale;
  res.certificate_min_eigenvalue = rep.min_eigenvalue;
  res.certificate_pass = rep.pass;
  if (!rep.pass) res.diagnostics.push_back("certificate check failed");
  res.not_monotone = res.gamma >= 1.0;
  res.infeasible_all_k = res.not_monotone;
  return res;
}

}  // namespace ilcsos
