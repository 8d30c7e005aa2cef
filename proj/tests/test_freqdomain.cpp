#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ilcsos/benchmark_plant.hpp"
#include "ilcsos/errors.hpp"
#include "ilcsos/freqdomain.hpp"
#include "ilcsos/verify.hpp"
#include "oracles.hpp"

using namespace ilcsos;

namespace {

// C (zI - A)^-1 B of the example realization, evaluated directly.
std::complex<double> state_space_tf(double theta, std::complex<double> z) {
  Eigen::Matrix2cd A;
  A << theta, -0.5, -2.0 * theta - 0.1, 0.2;
  Eigen::Vector2cd B(1.0, 1.0);
  Eigen::RowVector2cd C(1.0, 1.0);
  const Eigen::Matrix2cd M = z * Eigen::Matrix2cd::Identity() - A;
  return (C * M.inverse() * B)(0, 0);
}

std::vector<double> lambda_of_theta(double theta) {
  // theta = -0.5 lam1 - 0.7 lam2
  const double l2 = (theta + 0.5) / -0.2;
  return {1.0 - l2, l2};
}

UncertainTransferFunction point_plant(std::vector<double> num, std::vector<double> den) {
  UncertainTransferFunction p;
  for (double c : num) p.num.push_back(AffinePoly::constant({}, c));
  for (double c : den) p.den.push_back(AffinePoly::constant({}, c));
  return p;
}

UncertainTransferFunction delay() { return point_plant({1.0}, {0.0, 1.0}); }

double sup_freq(const UncertainTransferFunction& p, const NoncausalFir& q, const NoncausalFir& l, int n_omega = 4000) {
  SampleGrid g = SampleGrid::lattice(p.n_lambda(), 1, n_omega);
  if (p.n_lambda() == 0) g.lambda_points = {{}};
  return sampled_gamma_freq(p, q, l, g).gamma;
}

}  // namespace

TEST(Simplexify, MatchesHardcodedLambdaForm) {
  const UncertainTransferFunction a = simplexify(benchmark_theta_plant());
  const UncertainTransferFunction b = benchmark_lambda_plant();
  ASSERT_EQ(a.num.size(), b.num.size());
  ASSERT_EQ(a.den.size(), b.den.size());
  for (std::size_t i = 0; i < a.num.size(); ++i) EXPECT_TRUE(a.num[i].equals(b.num[i], 1e-12)) << i;
  for (std::size_t i = 0; i < a.den.size(); ++i) EXPECT_TRUE(a.den[i].equals(b.den[i], 1e-12)) << i;
}

TEST(Simplexify, MatchesStateSpaceRealization) {
  const UncertainTransferFunction p = benchmark_lambda_plant();
  for (double theta : {-0.7, -0.65, -0.6, -0.5}) {
    const auto l = lambda_of_theta(theta);
    for (double w : {0.1, 1.0, 2.5}) {
      const auto z = std::polar(1.0, w);
      EXPECT_LE(std::abs(p.evaluate(z, l) - state_space_tf(theta, z)), 1e-12);
    }
  }
}

TEST(Simplexify, UnitIntervalAndBox) {
  ThetaTransferFunction t;
  t.theta_vars = {"th"};
  const AffinePoly th = AffinePoly::variable({"th"}, "th");
  t.num = {th};
  t.den = {AffinePoly::constant({"th"}, 0.5), AffinePoly::constant({"th"}, 1.0)};
  t.vertices = {{0.0}, {1.0}};
  const auto s = simplexify(t, "lam");
  EXPECT_TRUE(s.num[0].equals(AffinePoly::variable({"lam1", "lam2"}, "lam2"), 1e-15));

  ThetaTransferFunction box;
  box.theta_vars = {"a", "b"};
  const AffinePoly a = AffinePoly::variable({"a", "b"}, "a"), b = AffinePoly::variable({"a", "b"}, "b");
  box.num = {a * b + AffinePoly::constant({"a", "b"}, 1.0)};
  box.den = {0.1 * a, AffinePoly::constant({"a", "b"}, 2.0) + b, AffinePoly::constant({"a", "b"}, 3.0)};
  box.vertices = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const auto sb = simplexify(box);
  ASSERT_EQ(sb.n_lambda(), 4);
  for (int v = 0; v < 4; ++v) {
    std::vector<double> l(4, 0.0);
    l[static_cast<std::size_t>(v)] = 1.0;
    const std::vector<double> pt = box.vertices[static_cast<std::size_t>(v)];
    const auto z = std::polar(1.0, 0.7);
    const std::complex<double> num = box.num[0].evaluate(pt);
    const std::complex<double> den = box.den[0].evaluate(pt) + box.den[1].evaluate(pt) * z + box.den[2].evaluate(pt) * z * z;
    EXPECT_LE(std::abs(sb.evaluate(z, l) - num / den), 1e-12);
  }
  box.vertices.clear();
  EXPECT_THROW(simplexify(box), EmptyPolytope);
}

TEST(Jury, Examples) {
  EXPECT_GT(jury_margin({0.0, 0.0, 1.0}), 0.0);
  EXPECT_LE(jury_margin({0.0, -2.0, 1.0}), 0.0);
  // Example plant at theta = -0.6: det(zI - A) = z^2 + 0.4 z + 0.43.
  const auto l = lambda_of_theta(-0.6);
  const auto den = benchmark_lambda_plant().den_at(l);
  EXPECT_NEAR(den[0] / den[2], 0.43, 1e-12);
  EXPECT_NEAR(den[1] / den[2], 0.4, 1e-12);
  EXPECT_GT(jury_margin(den), 0.0);
  EXPECT_LT(oracle::max_root_modulus(den), 1.0);
}

TEST(Jury, AgreesWithRootModulus) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int stable = 0;
  for (int t = 0; t < 2000; ++t) {
    const int n = 1 + static_cast<int>(rng() % 5);
    std::vector<double> c(static_cast<std::size_t>(n + 1));
    for (auto& v : c) v = u(rng);
    c.back() = 1.0 + std::abs(u(rng));
    const double rho = oracle::max_root_modulus(c);
    if (std::abs(rho - 1.0) < 1e-6) continue;
    const bool s = jury_margin(c) > 0.0;
    stable += s;
    EXPECT_EQ(s, rho < 1.0) << "degree " << n << " rho " << rho;
  }
  EXPECT_GT(stable, 50);
}

TEST(Jury, BenchmarkStableUnstableReported) {
  const JuryReport r = jury_stability(benchmark_lambda_plant());
  EXPECT_TRUE(r.stable);
  EXPECT_GT(r.worst_margin, 0.0);
  const JuryReport bad = jury_stability(point_plant({1.0}, {0.0, -2.0, 1.0}));
  EXPECT_FALSE(bad.stable);
}

TEST(TauDecompose, DelayExamples) {
  FreqSynthesisProblem pb;
  pb.plant = delay();
  const FreqDecisions dec = make_freq_decisions(pb);
  const RationalizedForm t = tau_decompose(pb, dec);
  for (double x : {-1.0, 0.0, 0.5, 3.0}) {
    const std::vector<double> pt{x}, v{0.0, 0.3};
    EXPECT_NEAR(t.num.re.evaluate(pt, v), 0.7 * t.den.evaluate(pt), 1e-12);
    EXPECT_NEAR(t.num.im.evaluate(pt, v), 0.0, 1e-12);
  }
  pb.lfilter = NoncausalFir::decision(0, 1);
  const FreqDecisions d2 = make_freq_decisions(pb);
  const RationalizedForm t2 = tau_decompose(pb, d2);
  const std::vector<double> x0{0.0}, v2{0.0, 0.2, 0.3};
  EXPECT_NEAR(t2.num.re.evaluate(x0, v2) / t2.den.evaluate(x0), 1.0 - 0.2 - 0.3, 1e-12);
}

TEST(TauDecompose, FrozenBenchmarkIdentity) {
  FreqSynthesisProblem pb;
  pb.plant = benchmark_lambda_plant().freeze(lambda_of_theta(-0.6));
  pb.lfilter = NoncausalFir::decision(0, 1);
  const FreqDecisions dec = make_freq_decisions(pb);
  const RationalizedForm t = tau_decompose(pb, dec);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const std::vector<double> v{0.0, 0.33, -0.12};
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng);
    const auto z = std::polar(1.0, 2.0 * std::atan(x));
    const std::complex<double> direct = 1.0 - z * (0.33 - 0.12 / z) * state_space_tf(-0.6, z);
    const std::vector<double> pt{x};
    const std::complex<double> got = std::complex<double>(t.num.re.evaluate(pt, v), t.num.im.evaluate(pt, v)) / t.den.evaluate(pt);
    EXPECT_LE(std::abs(got - direct), 1e-9);
  }
}

TEST(SynthFreqNominal, DelayPlant) {
  FreqSynthesisProblem pb;
  pb.plant = delay();
  pb.options.epsilon = 1e-9;
  const SynthesisResult r = synth_freq_nominal(pb);
  EXPECT_TRUE(r.certificate_pass);
  EXPECT_LE(r.gamma, 1e-3);
  EXPECT_NEAR(r.gains[0], 1.0, 1e-3);

  pb.lfilter = NoncausalFir::fixed({0.5});
  const SynthesisResult pinned = synth_freq_nominal(pb);
  EXPECT_NEAR(pinned.gamma, 0.5, 1e-4);
}

TEST(SynthFreqNominal, FrozenBenchmarkMatchesGridSearch) {
  FreqSynthesisProblem pb;
  pb.plant = benchmark_lambda_plant().freeze(lambda_of_theta(-0.6));
  pb.lfilter = NoncausalFir::decision(0, 2);
  const SynthesisResult r = synth_freq_nominal(pb);
  ASSERT_TRUE(r.certificate_pass);
  double best = 0.0;
  oracle::zoom_minimize(
      [&](const std::vector<double>& l) { return sup_freq(pb.plant, NoncausalFir::unit(), NoncausalFir::fixed(l), 720); },
      {0.3, 0.0, 0.0}, 1.0, 15, 12, &best);
  EXPECT_NEAR(r.gamma, best, 0.01 * best);
  EXPECT_LE(sup_freq(pb.plant, NoncausalFir::unit(), NoncausalFir::fixed(r.gains)), r.gamma + 1e-4);
}

TEST(THat, HomogeneousAndPointwiseIdentity) {
  FreqSynthesisProblem pb;
  pb.plant = benchmark_lambda_plant();
  pb.lfilter = NoncausalFir::decision(0, 1);
  const FreqDecisions dec = make_freq_decisions(pb);
  const THat t = build_T_hat(pb, dec);
  const auto& vars = t.matrix.variables();
  AffinePoly probe(vars);
  const auto lidx = probe.var_indices(pb.plant.lambda_vars);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (t.matrix(i, j).is_zero()) continue;
      EXPECT_TRUE(t.matrix(i, j).is_homogeneous(lidx)) << i << j;
      EXPECT_EQ(t.matrix(i, j).degree(lidx), t.lambda_degree);
    }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int s = 0; s < 50; ++s) {
    const double x = u(rng);
    const auto l = oracle::random_simplex_point(rng, 2);
    const double eta = 0.5;
    const std::vector<double> v{eta, 0.3 + 0.1 * u(rng), -0.1 + 0.05 * u(rng)};
    std::vector<double> pt{x};
    pt.insert(pt.end(), l.begin(), l.end());
    const Eigen::MatrixXd T = t.matrix.evaluate(pt, v);
    const double theta = -0.5 * l[0] - 0.7 * l[1];
    const auto z = std::polar(1.0, 2.0 * std::atan(x));
    const std::complex<double> F = 1.0 - z * (v[1] + v[2] / z) * state_space_tf(theta, z);
    // T = c [[eta nu3^2, nu1, nu2], [nu1, 1, 0], [nu2, 0, 1]] with c = (1+x^2)^D (sum lam)^d > 0.
    const double c = T(1, 1);
    EXPECT_NEAR(c, std::pow(1.0 + x * x, t.x_degree), 1e-9 * c);
    const std::complex<double> nu(T(0, 1) / c, T(0, 2) / c);
    const double nu3 = std::sqrt(T(0, 0) / (c * eta));
    EXPECT_NEAR(std::abs(nu) / nu3, std::abs(F), 1e-9 * std::max(1.0, std::abs(F)));
    EXPECT_NEAR(std::imag(nu * std::conj(F)), 0.0, 1e-9 * std::max(1.0, std::abs(nu * F)));
  }
}

TEST(SynthFreqRobust, UncertaintyFreeCollapseMatchesNominal) {
  FreqSynthesisProblem pb;
  pb.plant = benchmark_lambda_plant().freeze(lambda_of_theta(-0.55));
  pb.lfilter = NoncausalFir::decision(0, 1);
  // The eps margin is scaled differently in the two programs; shrink it.
  pb.options.epsilon = 1e-6;
  const SynthesisResult a = synth_freq_nominal(pb);
  const SynthesisResult b = synth_freq_robust(pb);
  EXPECT_NEAR(a.gamma, b.gamma, 1e-4);
}

TEST(SynthFreqRobust, BenchmarkOrdersZeroAndTwo) {
  FreqSynthesisProblem pb;
  pb.plant = benchmark_lambda_plant();
  pb.options.fixed_k = true;
  pb.lfilter = NoncausalFir::decision(0, 0);
  const SynthesisResult r0 = synth_freq_robust(pb);
  EXPECT_NEAR(r0.gamma, 0.812, 0.02);
  EXPECT_NEAR(r0.gains[0], 0.303, 0.05);
  EXPECT_TRUE(r0.certificate_pass);
  pb.lfilter = NoncausalFir::decision(0, 1);
  const SynthesisResult r1 = synth_freq_robust(pb);
  EXPECT_LE(r1.gamma, r0.gamma + 1e-6);
  pb.lfilter = NoncausalFir::decision(0, 2);
  const SynthesisResult r2 = synth_freq_robust(pb);
  EXPECT_NEAR(r2.gamma, 0.463, 0.02);
  EXPECT_NEAR(r2.gains[0], 0.491, 0.05);
  EXPECT_NEAR(r2.gains[1], 0.0252, 0.05);
  EXPECT_NEAR(r2.gains[2], 0.310, 0.05);
  EXPECT_LE(r2.gamma, r1.gamma + 1e-6);
  // Dense 400 x 400 grid never exceeds the certificate.
  NoncausalFir l1 = NoncausalFir::fixed(r1.gains);
  const SampleGrid g = SampleGrid::lattice(2, 399, 400);
  EXPECT_LE(sampled_gamma_freq(pb.plant, NoncausalFir::unit(), l1, g).gamma, r1.gamma + 1e-4);
}

TEST(SynthFreqRobust, RejectsUnstablePlant) {
  FreqSynthesisProblem pb;
  pb.plant = point_plant({1.0}, {0.0, -2.0, 1.0});
  EXPECT_THROW(synth_freq_robust(pb), InvalidProblem);
}

TEST(SynthFreq, BilinearRejected) {
  FreqSynthesisProblem pb;
  pb.plant = delay();
  pb.qfilter = NoncausalFir::decision(0, 0);
  EXPECT_THROW(make_freq_decisions(pb), InvalidProblem);
}

TEST(AlternateLQ, OneRoundIsRobustSynthesis) {
  FreqSynthesisProblem pb;
  pb.plant = benchmark_lambda_plant();
  pb.lfilter = NoncausalFir::decision(0, 1);
  pb.options.fixed_k = true;
  const auto trace = alternate_LQ(pb, 1);
  ASSERT_EQ(trace.size(), 1u);
  EXPECT_NEAR(trace[0].result.gamma, synth_freq_robust(pb).gamma, 1e-9);
}

TEST(AlternateLQ, DescentWithBoundedQ) {
  FreqSynthesisProblem pb;
  pb.plant = benchmark_lambda_plant();
  pb.lfilter = NoncausalFir::decision(0, 1);
  pb.qfilter = NoncausalFir::fixed({1.0});
  pb.qfilter.free = {true};
  pb.q_bounds = {{0, 0.8, 1.0}};
  pb.options.fixed_k = true;
  const auto trace = alternate_LQ(pb, 3);
  ASSERT_EQ(trace.size(), 3u);
  EXPECT_FALSE(trace[0].optimized_q);
  EXPECT_TRUE(trace[1].optimized_q);
  EXPECT_LE(trace[1].result.gamma, trace[0].result.gamma + 1e-6);
  EXPECT_LE(trace[2].result.gamma, trace[1].result.gamma + 1e-6);
  EXPECT_LE(trace[2].result.gamma, 0.683 + 1e-6);
  EXPECT_GE(trace[1].q_values[0], 0.8 - 1e-6);
}
