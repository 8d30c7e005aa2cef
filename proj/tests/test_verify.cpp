#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ilcsos/benchmark_plant.hpp"
#include "ilcsos/errors.hpp"
#include "ilcsos/simulate.hpp"
#include "ilcsos/verify.hpp"
#include "oracles.hpp"

using namespace ilcsos;

namespace {

LiftedUncertainPlant point_lifted(std::vector<double> markov) {
  LiftedUncertainPlant p;
  p.N = static_cast<int>(markov.size());
  for (double c : markov) p.markov.push_back(AffinePoly::constant({}, c));
  return p;
}

UncertainTransferFunction delay() {
  UncertainTransferFunction p;
  p.num = {AffinePoly::constant({}, 1.0)};
  p.den = {AffinePoly::constant({}, 0.0), AffinePoly::constant({}, 1.0)};
  return p;
}

SampleGrid point_grid(int n_omega) {
  SampleGrid g = SampleGrid::lattice(0, 1, n_omega);
  g.lambda_points = {{}};
  return g;
}

}  // namespace

TEST(SampleGrid, PointsOnSimplex) {
  for (int n : {1, 2, 3, 5}) {
    const SampleGrid g = SampleGrid::make(n, 3);
    EXPECT_NO_THROW(g.validate());
    EXPECT_EQ(g.freq_points.size(), 720u);
    for (const auto& p : g.lambda_points) {
      double s = 0.0;
      for (double v : p) {
        EXPECT_GE(v, -1e-12);
        s += v;
      }
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
    for (double w : g.freq_points) {
      EXPECT_GE(w, 0.0);
      EXPECT_LT(w, 2.0 * std::numbers::pi);
    }
  }
  SampleGrid bad = SampleGrid::make(2);
  bad.lambda_points.push_back({0.7, 0.7});
  EXPECT_ANY_THROW(bad.validate());
}

TEST(SampleGrid, SeedReproducible) {
  const SampleGrid a = SampleGrid::make(3, 9), b = SampleGrid::make(3, 9), c = SampleGrid::make(3, 10);
  EXPECT_EQ(a.lambda_points, b.lambda_points);
  EXPECT_NE(a.lambda_points, c.lambda_points);
}

TEST(SampledGammaTime, ScalarAndIdentity) {
  const LiftedUncertainPlant one = point_lifted({1.0});
  const SampleGrid g = point_grid(1);
  EXPECT_NEAR(sampled_gamma_time(one, Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Constant(1, 1, 0.5), g).gamma, 0.5,
              1e-15);
  const LiftedUncertainPlant two = point_lifted({1.0, 0.0});
  EXPECT_NEAR(sampled_gamma_time(two, Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2), g).gamma, 0.0, 1e-15);
}

TEST(SampledGammaTime, MatchesDirectSvdAndReportsArgmax) {
  LiftedUncertainPlant p;
  p.N = 2;
  p.lambda_vars = {"a", "b"};
  const AffinePoly a = AffinePoly::variable(p.lambda_vars, "a"), b = AffinePoly::variable(p.lambda_vars, "b");
  p.markov = {a + 2.0 * b, a - b};
  Eigen::MatrixXd L(2, 2);
  L << 0.6, 0.0, 0.1, 0.6;
  const SampleGrid g = SampleGrid::lattice(2, 200, 1);
  const TimeGammaSample s = sampled_gamma_time(p, Eigen::MatrixXd::Identity(2, 2), L, g);
  double best = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double l1 = i / 200.0;
    const double p1 = l1 + 2.0 * (1.0 - l1), p2 = l1 - (1.0 - l1);
    const Eigen::MatrixXd P = oracle::lower_toeplitz({p1, p2}, 2);
    best = std::max(best, oracle::sigma_max(P * (Eigen::MatrixXd::Identity(2, 2) - L * P) * P.inverse()));
  }
  EXPECT_NEAR(s.gamma, best, 1e-12);
  const Eigen::MatrixXd P = p.lifted_at(s.lambda);
  EXPECT_NEAR(oracle::sigma_max(P * (Eigen::MatrixXd::Identity(2, 2) - L * P) * P.inverse()), s.gamma, 1e-12);
}

TEST(SampledGammaTime, SingularPlantRejected) {
  LiftedUncertainPlant p;
  p.N = 1;
  p.lambda_vars = {"a", "b"};
  p.markov = {AffinePoly::variable(p.lambda_vars, "a") - AffinePoly::variable(p.lambda_vars, "b")};
  EXPECT_THROW(sampled_gamma_time(p, Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Zero(1, 1), SampleGrid::lattice(2, 2, 1)),
               SingularPlant);
}

TEST(SampledGammaFreq, DelayFlatResponse) {
  const FreqGammaSample s = sampled_gamma_freq(delay(), NoncausalFir::unit(), NoncausalFir::fixed({0.5}), point_grid(720));
  EXPECT_NEAR(s.gamma, 0.5, 1e-14);
}

TEST(SampledGammaFreq, MatchesStateSpaceEvaluation) {
  const NoncausalFir L = NoncausalFir::fixed({0.508, -0.0716, 0.189, -0.197});
  const SampleGrid g = SampleGrid::lattice(2, 50, 360);
  const FreqGammaSample s = sampled_gamma_freq(benchmark_lambda_plant(), NoncausalFir::unit(), L, g);
  double best = 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double lam2 = i / 50.0;
    const StateSpace ss = benchmark_state_space(-0.5 * (1.0 - lam2) - 0.7 * lam2);
    for (double w : g.freq_points) {
      const std::complex<double> z = std::polar(1.0, w);
      const Eigen::MatrixXcd R = (z * Eigen::MatrixXcd::Identity(2, 2) - ss.A.cast<std::complex<double>>()).inverse();
      const std::complex<double> P =
          (ss.C.cast<std::complex<double>>() * R * ss.B.cast<std::complex<double>>())(0, 0) + ss.D;
      std::complex<double> Lz = 0.0;
      for (int t = 0; t < 4; ++t) Lz += L.values[static_cast<std::size_t>(t)] * std::pow(z, -t);
      best = std::max(best, std::abs(1.0 - z * Lz * P));
    }
  }
  EXPECT_NEAR(s.gamma, best, 1e-10);
  EXPECT_LE(s.gamma, 0.319 + 0.02);
}

TEST(SampledGammaFreq, UnitCirclePoleRejected) {
  UncertainTransferFunction p;
  p.num = {AffinePoly::constant({}, 1.0)};
  p.den = {AffinePoly::constant({}, -1.0), AffinePoly::constant({}, 1.0)};
  SampleGrid g = point_grid(8);
  EXPECT_THROW(sampled_gamma_freq(p, NoncausalFir::unit(), NoncausalFir::fixed({0.5}), g), UnitCirclePole);
}

TEST(SampledGammaFreq, RefinementIsMonotone) {
  const UncertainTransferFunction p = benchmark_lambda_plant();
  const NoncausalFir L = NoncausalFir::fixed({0.3261, -0.1321});
  double prev = 0.0;
  for (int r = 0; r < 4; ++r) {
    const int steps = 10 << r, n_omega = 90 << r;
    const double g = sampled_gamma_freq(p, NoncausalFir::unit(), L, SampleGrid::lattice(2, steps, n_omega)).gamma;
    EXPECT_GE(g, prev);
    EXPECT_LE(g, 0.682881 + 1e-4);
    prev = g;
  }
}

TEST(SampledGamma, TimeApproachesFrequencyForLongTrials) {
  // Causal order-2 learning filter on the frozen example plant.
  const StateSpace ss = benchmark_state_space(-0.6);
  const std::vector<double> l{0.49, 0.026, 0.31};
  const int N = 8;
  const auto h = markov_from_state_space(ss, N);
  LiftedUncertainPlant lp = point_lifted(h);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i)
    for (int t = 0; t < 3 && i - t >= 0; ++t) L(i, i - t) = l[static_cast<std::size_t>(t)];
  const double gt = sampled_gamma_time(lp, Eigen::MatrixXd::Identity(N, N), L, point_grid(1)).gamma;

  UncertainTransferFunction tf = benchmark_lambda_plant().freeze(std::vector<double>{0.5, 0.5});
  const double gf = sampled_gamma_freq(tf, NoncausalFir::unit(), NoncausalFir::fixed(l), point_grid(4000)).gamma;
  EXPECT_NEAR(gt, gf, 0.1 * gf);
}
