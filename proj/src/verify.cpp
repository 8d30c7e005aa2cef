#include "ilcsos/verify.hpp"

#include <cmath>
#include <numbers>

#include "ilcsos/errors.hpp"

namespace ilcsos {

namespace {

std::vector<double> uniform_omega(int n) {
  std::vector<double> w;
  for (int k = 0; k < n; ++k) w.push_back(2.0 * std::numbers::pi * k / n);
  return w;
}

std::complex<double> horner(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace

SampleGrid SampleGrid::make(int n_lambda, std::uint64_t seed, int lattice_steps, int random_points, int n_omega) {
  SampleGrid g;
  g.seed = seed;
  g.freq_points = uniform_omega(n_omega);
  if (n_lambda == 0) {
    g.lambda_points.push_back({});
    return g;
  }
  g.lambda_points = simplex_vertices(n_lambda);
  if (n_lambda >= 2) {
    auto extra = n_lambda <= 3 ? simplex_lattice(n_lambda, lattice_steps) : simplex_edge_grid(n_lambda, lattice_steps);
    for (auto& p : extra) g.lambda_points.push_back(std::move(p));
  }
  for (auto& p : simplex_random(n_lambda, random_points, seed)) g.lambda_points.push_back(std::move(p));
  return g;
}

SampleGrid SampleGrid::vertices_and_random(int n_lambda, int random_points, int n_omega, std::uint64_t seed) {
  SampleGrid g;
  g.seed = seed;
  g.freq_points = uniform_omega(n_omega);
  if (n_lambda == 0) {
    g.lambda_points.push_back({});
    return g;
  }
  g.lambda_points = simplex_vertices(n_lambda);
  for (auto& p : simplex_random(n_lambda, random_points, seed)) g.lambda_points.push_back(std::move(p));
  return g;
}

SampleGrid SampleGrid::lattice(int n_lambda, int steps, int n_omega) {
  SampleGrid g;
  g.freq_points = uniform_omega(n_omega);
  if (n_lambda == 0) {
    g.lambda_points.push_back({});
  } else {
    g.lambda_points = simplex_lattice(n_lambda, steps);
  }
  return g;
}

void SampleGrid::validate() const {
  if (lambda_points.empty()) throw InvalidProblem("sample grid has no lambda points");
  for (const auto& p : lambda_points) {
    double s = 0.0;
    for (double v : p) {
      if (v < -1e-12) throw InvalidProblem("sample point outside the simplex");
      s += v;
    }
    if (!p.empty() && std::abs(s - 1.0) > 1e-12) throw InvalidProblem("sample point outside the simplex");
  }
}

TimeGammaSample sampled_gamma_time(const LiftedUncertainPlant& plant, const Eigen::MatrixXd& Q, const Eigen::MatrixXd& L,
                                   const SampleGrid& grid) {
  grid.validate();
  const int N = plant.N;
  if (Q.rows() != N || Q.cols() != N || L.rows() != N || L.cols() != N) throw DimensionMismatch("filter size differs from N");
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);
  TimeGammaSample best{-1.0, {}};
  for (const auto& pt : grid.lambda_points) {
    const Eigen::MatrixXd P = plant.lifted_at(pt);
    const double p1 = P(0, 0);
    if (!(std::abs(p1) > 1e-14 * std::max(1.0, P.cwiseAbs().maxCoeff()))) {
      throw SingularPlant("first Markov parameter vanishes at a grid point");
    }
    // X P = P Q (I - L P)  =>  X = (P Q (I - L P)) P^-1, via a triangular solve on the transpose.
    const Eigen::MatrixXd R = P * Q * (I - L * P);
    const Eigen::MatrixXd E = P.transpose().triangularView<Eigen::Upper>().solve(R.transpose()).transpose();
    const double s = Eigen::JacobiSVD<Eigen::MatrixXd>(E).singularValues()(0);
    if (s > best.gamma) best = {s, pt};
  }
  return best;
}

FreqGammaSample sampled_gamma_freq(const UncertainTransferFunction& plant, const NoncausalFir& Q, const NoncausalFir& L,
                                   const SampleGrid& grid) {
  grid.validate();
  plant.validate();
  Q.validate();
  L.validate();
  if (grid.freq_points.empty()) throw InvalidProblem("sample grid has no frequencies");
  std::vector<std::complex<double>> zs;
  std::vector<std::complex<double>> qz, lz;
  for (double w : grid.freq_points) {
    const auto z = std::polar(1.0, w);
    zs.push_back(z);
    qz.push_back(Q.evaluate(z));
    lz.push_back(L.evaluate(z));
  }
  FreqGammaSample best{-1.0, {}, 0.0};
  for (const auto& pt : grid.lambda_points) {
    const auto num = plant.num_at(pt);
    const auto den = plant.den_at(pt);
    double dscale = 0.0;
    for (double c : den) dscale = std::max(dscale, std::abs(c));
    for (std::size_t k = 0; k < zs.size(); ++k) {
      const auto d = horner(den, zs[k]);
      if (std::abs(d) <= 1e-12 * std::max(dscale, 1e-300)) throw UnitCirclePole("plant denominator vanishes on the unit circle");
      const double g = std::abs(qz[k] * (1.0 - zs[k] * lz[k] * horner(num, zs[k]) / d));
      if (g > best.gamma) best = {g, pt, grid.freq_points[k]};
    }
  }
  return best;
}

}  // namespace ilcsos
