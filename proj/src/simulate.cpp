#include "ilcsos/simulate.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <sstream>

#include "ilcsos/errors.hpp"

namespace ilcsos {

namespace {

void check_square(const Eigen::MatrixXd& m, Eigen::Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) throw DimensionMismatch(std::string(what) + " has the wrong size");
}

}  // namespace

Eigen::VectorXd asymptotic_error(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q, const Eigen::MatrixXd& L,
                                 const Eigen::VectorXd& y_d, const Eigen::VectorXd& d) {
  const Eigen::Index N = P.rows();
  check_square(P, N, "plant");
  check_square(Q, N, "Q");
  check_square(L, N, "L");
  if (y_d.size() != N || d.size() != N) throw DimensionMismatch("reference or disturbance length differs from N");
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);
  const Eigen::MatrixXd T = Q * (I - L * P);
  const double rho = T.eigenvalues().cwiseAbs().maxCoeff();
  if (!(rho < 1.0)) throw Divergent("iteration map has spectral radius " + std::to_string(rho));

  const Eigen::VectorXd r = y_d - d;
  const Eigen::MatrixXd A = I - T;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  Eigen::VectorXd u;
  if (cond <= 1e12) {
    u = A.fullPivLu().solve(Q * L * r);
  } else {
    u = Eigen::VectorXd::Zero(N);
    for (int it = 0; it < 100000; ++it) {
      const Eigen::VectorXd next = Q * (u + L * (r - P * u));
      const double step = (next - u).norm();
      u = next;
      if (step <= 1e-15 * std::max(1.0, u.norm())) break;
    }
  }
  return r - P * u;
}

TrialTrace run_ilc(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q, const Eigen::MatrixXd& L, const TrialConfig& config) {
  const Eigen::Index N = P.rows();
  if (config.trials < 1) throw InvalidProblem("trial count must be positive");
  Eigen::VectorXd u = config.u0.size() == 0 ? Eigen::VectorXd::Zero(N) : config.u0;
  if (u.size() != N) throw DimensionMismatch("initial input length differs from N");

  TrialTrace tr;
  tr.e_infinity = asymptotic_error(P, Q, L, config.y_d, config.d);
  std::vector<Eigen::VectorXd> errs;
  for (int j = 0; j < config.trials; ++j) {
    const Eigen::VectorXd e = config.y_d - P * u - config.d;
    tr.error_norms.push_back(e.norm());
    tr.distance_to_limit.push_back((tr.e_infinity - e).norm());
    if (config.keep_full) {
      tr.inputs.push_back(u);
      tr.errors.push_back(e);
    }
    u = Q * (u + L * e);
  }
  for (int j = 0; j + 1 < config.trials; ++j) {
    const double den = tr.distance_to_limit[static_cast<std::size_t>(j)];
    if (!(den > kRatioFloor)) break;
    tr.contraction_ratios.push_back(tr.distance_to_limit[static_cast<std::size_t>(j + 1)] / den);
  }
  return tr;
}

std::vector<double> markov_from_transfer_function(const std::vector<double>& num, const std::vector<double>& den, int n) {
  if (den.empty() || den.back() == 0.0) throw InvalidProblem("denominator leading coefficient is zero");
  const int dn = static_cast<int>(den.size()) - 1;
  if (static_cast<int>(num.size()) - 1 > dn) throw InvalidProblem("improper transfer function");
  // Coefficients in powers of z^-1: alpha_j = den[dn - j], beta_j = num[dn - j].
  auto alpha = [&](int j) { return den[static_cast<std::size_t>(dn - j)]; };
  auto beta = [&](int j) {
    const int i = dn - j;
    return i >= 0 && i < static_cast<int>(num.size()) ? num[static_cast<std::size_t>(i)] : 0.0;
  };
  std::vector<double> h(static_cast<std::size_t>(n + 1), 0.0);
  for (int k = 0; k <= n; ++k) {
    double acc = k <= dn ? beta(k) : 0.0;
    for (int j = 1; j <= std::min(k, dn); ++j) acc -= alpha(j) * h[static_cast<std::size_t>(k - j)];
    h[static_cast<std::size_t>(k)] = acc / alpha(0);
  }
  double scale = 0.0;
  for (double c : num) scale = std::max(scale, std::abs(c));
  if (std::abs(h[0]) > 1e-12 * std::max(scale / std::abs(alpha(0)), 1e-300)) {
    throw InvalidProblem("plant has direct feedthrough; lifted form needs relative degree one");
  }
  return {h.begin() + 1, h.end()};
}

Eigen::MatrixXd lifted_fir(const NoncausalFir& f, int N, bool* truncated) {
  f.validate();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const int t = f.lead + (i - j);  // power(t) = -(i - j)
      if (t >= 0 && t < f.size()) m(i, j) = f.values[static_cast<std::size_t>(t)];
    }
  }
  if (truncated) *truncated = f.lead > 0;
  return m;
}

Eigen::VectorXd random_disturbance(int N, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  Eigen::VectorXd d(N);
  for (int i = 0; i < N; ++i) d(i) = dist(rng);
  return d;
}

std::string trace_csv(const TrialTrace& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "trial,error_norm,ratio\n";
  for (std::size_t j = 0; j < trace.error_norms.size(); ++j) {
    os << j << ',' << trace.error_norms[j] << ',';
    if (j < trace.contraction_ratios.size()) os << trace.contraction_ratios[j];
    os << '\n';
  }
  return os.str();
}

}  // namespace ilcsos
