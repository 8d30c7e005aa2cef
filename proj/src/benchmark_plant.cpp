#include "ilcsos/benchmark_plant.hpp"

namespace ilcsos {

namespace {

AffinePoly lin(const std::vector<std::string>& vars, double c0, const std::vector<double>& c) {
  AffinePoly p = AffinePoly::constant(vars, c0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    Exponent e(vars.size(), 0);
    e[i] = 1;
    p.add_term(e, c[i]);
  }
  return p;
}

}  // namespace

ThetaTransferFunction benchmark_theta_plant() {
  const std::vector<std::string> v{"theta"};
  ThetaTransferFunction p;
  p.theta_vars = v;
  p.num = {lin(v, 16.0, {60.0}), lin(v, -40.0, {0.0})};
  p.den = {lin(v, 1.0, {16.0}), lin(v, 4.0, {20.0}), lin(v, -20.0, {0.0})};
  p.vertices = {{kBenchmarkThetaHi}, {kBenchmarkThetaLo}};
  return p;
}

UncertainTransferFunction benchmark_lambda_plant() {
  const std::vector<std::string> v{"lam1", "lam2"};
  UncertainTransferFunction p;
  p.lambda_vars = v;
  p.num = {lin(v, -16.0, {30.0, 42.0}), lin(v, 40.0, {0.0, 0.0})};
  p.den = {lin(v, -1.0, {8.0, 11.2}), lin(v, -4.0, {10.0, 14.0}), lin(v, 20.0, {0.0, 0.0})};
  return p;
}

StateSpace benchmark_state_space(double theta) {
  StateSpace ss;
  ss.A.resize(2, 2);
  ss.A << theta, -0.5, -2.0 * theta - 0.1, 0.2;
  ss.B = Eigen::Vector2d(1.0, 1.0);
  ss.C = Eigen::RowVector2d(1.0, 1.0);
  return ss;
}

std::vector<double> markov_from_state_space(const StateSpace& ss, int n) {
  std::vector<double> out;
  Eigen::VectorXd x = ss.B;
  for (int k = 0; k < n; ++k) {
    out.push_back(ss.C.dot(x));
    x = ss.A * x;
  }
  return out;
}

}  // namespace ilcsos
