#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ilcsos/freqdomain.hpp"

namespace ilcsos {

struct TrialConfig {
  Eigen::VectorXd y_d;
  Eigen::VectorXd d;
  Eigen::VectorXd u0;  // empty means zero
  int trials = 30;
  bool keep_full = false;
};

struct TrialTrace {
  std::vector<double> error_norms;         // ||e_j||, j = 0 .. trials-1
  // ||e_inf - e_(j+1)|| / ||e_inf - e_j||, only while the denominator exceeds 1e-10.
  std::vector<double> contraction_ratios;
  std::vector<double> distance_to_limit;   // ||e_inf - e_j||
  Eigen::VectorXd e_infinity;
  std::vector<Eigen::VectorXd> inputs;
  std::vector<Eigen::VectorXd> errors;
  bool truncated_noncausal = false;
};

inline constexpr double kRatioFloor = 1e-10;

// e_inf of u <- Q (u + L e), e = y_d - P u - d. Throws Divergent when the
// spectral radius of Q (I - L P) is at least 1.
Eigen::VectorXd asymptotic_error(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q, const Eigen::MatrixXd& L,
                                 const Eigen::VectorXd& y_d, const Eigen::VectorXd& d);

TrialTrace run_ilc(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q, const Eigen::MatrixXd& L, const TrialConfig& config);

// Impulse response h_1 .. h_n of num/den (ascending coefficients) by long
// division. Throws InvalidProblem when the plant has direct feedthrough.
std::vector<double> markov_from_transfer_function(const std::vector<double>& num, const std::vector<double>& den, int n);

// Lifted N x N Toeplitz of an FIR, entry (i, j) = coefficient of z^-(i-j).
// Leads that reach past the horizon are dropped; `truncated` reports whether
// the filter has any lead at all.
Eigen::MatrixXd lifted_fir(const NoncausalFir& f, int N, bool* truncated = nullptr);

// Uniform in [-amplitude, amplitude], reproducible from the seed.
Eigen::VectorXd random_disturbance(int N, double amplitude, std::uint64_t seed);

std::string trace_csv(const TrialTrace& trace);

}  // namespace ilcsos
