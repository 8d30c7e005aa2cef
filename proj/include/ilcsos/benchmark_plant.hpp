#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ilcsos/freqdomain.hpp"

namespace ilcsos {

// Second-order example plant with one uncertain parameter theta in [-0.7, -0.5]:
// A = [[theta, -0.5], [-2 theta - 0.1, 0.2]], B = [1; 1], C = [1, 1].
inline constexpr double kBenchmarkThetaLo = -0.7;
inline constexpr double kBenchmarkThetaHi = -0.5;

// Transfer function in theta, written with a negative leading denominator
// coefficient: (-40z + 60 theta + 16) / (-20 z^2 + (4 + 20 theta) z + 16 theta + 1).
// Vertices are ordered theta = -0.5 lam1 - 0.7 lam2.
ThetaTransferFunction benchmark_theta_plant();

// The same plant over the 2-simplex:
// (40z + 30 lam1 + 42 lam2 - 16) / (20 z^2 + (10 lam1 + 14 lam2 - 4) z + 8 lam1 + 11.2 lam2 - 1).
UncertainTransferFunction benchmark_lambda_plant();

struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0.0;
};

StateSpace benchmark_state_space(double theta);

// Markov parameters p_1..p_n = C A^(k-1) B.
std::vector<double> markov_from_state_space(const StateSpace& ss, int n);

}  // namespace ilcsos
