#include <gtest/gtest.h>

#include <random>

#include "ilcsos/errors.hpp"
#include "ilcsos/simplex.hpp"
#include "ilcsos/timedomain.hpp"
#include "ilcsos/verify.hpp"
#include "oracles.hpp"

using namespace ilcsos;

namespace {

const std::vector<std::string> kLam{"lam1", "lam2"};

AffinePoly lam(int i) { return AffinePoly::variable(kLam, kLam[static_cast<std::size_t>(i)]); }
AffinePoly cst(double v, const std::vector<std::string>& vars = kLam) { return AffinePoly::constant(vars, v); }

LiftedUncertainPlant plant_of(std::vector<AffinePoly> markov, std::vector<std::string> vars) {
  LiftedUncertainPlant p;
  p.N = static_cast<int>(markov.size());
  p.lambda_vars = std::move(vars);
  p.markov = std::move(markov);
  return p;
}

// Random polytopic plant: each Markov parameter affine over the simplex,
// p_1 kept positive.
LiftedUncertainPlant random_plant(std::mt19937_64& rng, int N, int n_lambda) {
  std::uniform_real_distribution<double> u(-0.5, 0.5), p1(0.8, 1.5);
  std::vector<std::string> vars;
  for (int i = 0; i < n_lambda; ++i) vars.push_back("lam" + std::to_string(i + 1));
  std::vector<AffinePoly> m;
  for (int k = 0; k < N; ++k) {
    AffinePoly p(vars);
    for (int j = 0; j < n_lambda; ++j) {
      Exponent e(static_cast<std::size_t>(n_lambda), 0);
      e[static_cast<std::size_t>(j)] = 1;
      p.add_term(e, k == 0 ? p1(rng) : u(rng));
    }
    m.push_back(p);
  }
  return plant_of(m, vars);
}

std::vector<double> gains_to_filter(const SynthesisResult& r, int N) {
  // Causal lifted L: c_0 .. c_(N-1) are the gains in order.
  std::vector<double> v(static_cast<std::size_t>(2 * N - 1), 0.0);
  for (int t = 0; t < N; ++t) v[static_cast<std::size_t>(N - 1 + t)] = r.gains[static_cast<std::size_t>(t)];
  return v;
}

double brute_force_gamma(const LiftedUncertainPlant& pl, const std::vector<double>& lifted_l,
                         const std::vector<SimplexPoint>& pts) {
  const int N = pl.N;
  double g = 0.0;
  Eigen::MatrixXd L(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) L(i, j) = lifted_l[static_cast<std::size_t>(i - j + N - 1)];
  for (const auto& p : pts) {
    const Eigen::MatrixXd P = pl.lifted_at(p);
    g = std::max(g, oracle::sigma_max(P * (Eigen::MatrixXd::Identity(N, N) - L * P) * P.inverse()));
  }
  return g;
}

}  // namespace

TEST(LiftedPlant, Placement) {
  const std::vector<std::string> none;
  const PolyMatrix P = build_lifted_plant({cst(1.0, none), cst(2.0, none)}, 2);
  Eigen::Matrix2d expect;
  expect << 1, 0, 2, 1;
  EXPECT_EQ(P.evaluate({}), expect);
  const PolyMatrix P3 = build_lifted_plant({lam(0), lam(1), cst(1.0)}, 3);
  EXPECT_TRUE(P3(2, 0).equals(cst(1.0)));
  EXPECT_TRUE(P3(2, 2).equals(lam(0)));
  EXPECT_TRUE(P3(0, 2).is_zero());
  EXPECT_THROW(build_lifted_plant({lam(0)}, 2), DimensionMismatch);
}

TEST(LiftedFilterMatrix, Placement) {
  LiftedFilter f = LiftedFilter::zero(2);
  f.values = {1.0, 2.0, 3.0};  // (l_-1, l_0, l_1)
  Eigen::Matrix2d expect;
  expect << 2, 1, 3, 2;
  EXPECT_EQ(f.matrix(), expect);
  EXPECT_EQ(LiftedFilter::identity(3).matrix(), Eigen::Matrix3d::Identity());

  const LiftedFilter d = LiftedFilter::decision(3, false);
  const std::vector<int> ids{0, 1, 2, 3, 4};
  const PolyMatrix m = build_filter_matrix(d, ids, kLam);
  EXPECT_EQ(m(0, 2).terms().begin()->second.coefficient(0), 1.0);  // l_-2 at (1,3)
  EXPECT_THROW(build_filter_matrix(d, {0, 1}, kLam), DimensionMismatch);
}

TEST(BuildM, ScalarCase) {
  const std::vector<std::string> none;
  TimeSynthesisProblem pb{plant_of({cst(1.0, none)}, none), LiftedFilter::identity(1), LiftedFilter::decision(1, true), {}};
  const TimeDecisions dec = make_time_decisions(pb);
  const PolyMatrix M = build_M(pb, dec);
  for (double eta : {0.3, 2.0})
    for (double l : {-1.0, 0.4}) {
      const std::vector<double> v{eta, l};
      const Eigen::MatrixXd Mn = M.evaluate({}, v);
      EXPECT_DOUBLE_EQ(Mn(0, 0), eta);
      EXPECT_DOUBLE_EQ(Mn(1, 0), 1.0 - l);
      EXPECT_DOUBLE_EQ(Mn(0, 1), 1.0 - l);
      EXPECT_DOUBLE_EQ(Mn(1, 1), 1.0);
    }
}

TEST(BuildM, HomogeneousScalarUncertain) {
  TimeSynthesisProblem pb{plant_of({lam(0) + 2.0 * lam(1)}, kLam), LiftedFilter::identity(1), LiftedFilter::decision(1, true),
                          {}};
  const TimeDecisions dec = make_time_decisions(pb);
  const PolyMatrix M = build_M(pb, dec);
  EXPECT_TRUE(M.is_symmetric());
  const std::vector<int> all{0, 1};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      EXPECT_TRUE(M(i, j).is_homogeneous(all));
      EXPECT_EQ(M(i, j).degree(all), 2);
    }
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const auto p = oracle::random_simplex_point(rng, 2);
    const double a = p[0] + 2.0 * p[1];
    const double eta = 0.7, l = 0.3;
    const Eigen::MatrixXd Mn = M.evaluate(p, std::vector<double>{eta, l});
    EXPECT_NEAR(Mn(0, 0), eta * a * a, 1e-12);
    EXPECT_NEAR(Mn(1, 0), a * (1.0 - l * a), 1e-12);
    EXPECT_NEAR(Mn(1, 1), 1.0, 1e-12);
  }
}

TEST(BuildM, ErrorDynamicsIdentity) {
  std::mt19937_64 rng(6);
  const LiftedUncertainPlant pl = random_plant(rng, 3, 2);
  LiftedFilter q = LiftedFilter::zero(3);
  q.values = {0.1, -0.2, 0.05, 0.9, 0.1};
  TimeSynthesisProblem pb{pl, q, LiftedFilter::decision(3, false), {}};
  const TimeDecisions dec = make_time_decisions(pb);
  const PolyMatrix M = build_M(pb, dec);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const auto p = oracle::random_simplex_point(rng, 2);
    std::vector<double> v(static_cast<std::size_t>(dec.space.size()));
    for (auto& x : v) x = u(rng);
    std::vector<double> lv(5);
    for (int i = 0; i < 5; ++i) lv[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(dec.l_ids[static_cast<std::size_t>(i)])];
    const Eigen::MatrixXd P = pl.lifted_at(p);
    const Eigen::MatrixXd L = pb.lfilter.matrix(lv);
    const Eigen::MatrixXd E = P * q.matrix() * (Eigen::MatrixXd::Identity(3, 3) - L * P) * P.inverse();
    const Eigen::MatrixXd Mn = M.evaluate(p, v);
    const double a = P.determinant();
    EXPECT_LE((Mn.block(3, 0, 3, 3) / a - E).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(SynthTime, TrivialScalar) {
  const std::vector<std::string> none;
  TimeSynthesisProblem pb{plant_of({cst(1.0, none)}, none), LiftedFilter::identity(1), LiftedFilter::decision(1, true), {}};
  pb.options.epsilon = 1e-9;
  const SynthesisResult r = synth_time(pb);
  EXPECT_TRUE(r.certificate_pass);
  EXPECT_LE(r.gamma, 1e-4);
  ASSERT_EQ(r.gains.size(), 1u);
  EXPECT_NEAR(r.gains[0], 1.0, 1e-4);
}

TEST(SynthTime, MatchesGridAtReturnedGains) {
  TimeSynthesisProblem pb{plant_of({cst(1.0), lam(0) - lam(1)}, kLam), LiftedFilter::identity(2),
                          LiftedFilter::decision(2, true), {}};
  const SynthesisResult r = synth_time(pb);
  ASSERT_TRUE(r.certificate_pass);
  const double g = brute_force_gamma(pb.plant, gains_to_filter(r, 2), simplex_lattice(2, 200));
  EXPECT_LE(g, r.gamma + 1e-6);
  EXPECT_NEAR(g, r.gamma, 0.01 * r.gamma);
}

TEST(SynthTime, UpperBoundsDenseSample) {
  std::mt19937_64 rng(12);
  const LiftedUncertainPlant pl = random_plant(rng, 3, 3);
  TimeSynthesisProblem pb{pl, LiftedFilter::identity(3), LiftedFilter::decision(3, true), {}};
  const SynthesisResult r = synth_time(pb);
  ASSERT_TRUE(r.certificate_pass);
  auto pts = simplex_vertices(3);
  for (auto& p : simplex_random(3, 10000, 99)) pts.push_back(p);
  EXPECT_LE(brute_force_gamma(pl, gains_to_filter(r, 3), pts), r.gamma + 1e-6);
}

TEST(SynthTime, PolyaMonotoneInK) {
  std::mt19937_64 rng(31);
  for (int inst = 0; inst < 3; ++inst) {
    const LiftedUncertainPlant pl = random_plant(rng, 2, 2);
    double eta[2];
    for (int k = 0; k < 2; ++k) {
      TimeSynthesisProblem pb{pl, LiftedFilter::identity(2), LiftedFilter::decision(2, true), {}};
      pb.options.k_min = k;
      pb.options.fixed_k = true;
      eta[k] = synth_time(pb).eta;
    }
    EXPECT_LE(eta[1], eta[0] + 1e-6);
  }
}

TEST(SynthTime, PointUncertaintyMatchesScalarSearch) {
  const std::vector<std::string> one{"lam1"};
  const AffinePoly l1 = AffinePoly::variable(one, "lam1");
  const LiftedUncertainPlant pl = plant_of({1.2 * l1, 0.5 * l1}, one);
  TimeSynthesisProblem pb{pl, LiftedFilter::identity(2), LiftedFilter::decision(2, true), {}};
  pb.options.epsilon = 1e-7;
  const SynthesisResult r = synth_time(pb);
  ASSERT_TRUE(r.certificate_pass);
  const std::vector<SimplexPoint> pts{{1.0}};
  double best = 0.0;
  oracle::zoom_minimize(
      [&](const std::vector<double>& l) {
        return brute_force_gamma(pl, {0.0, l[0], l[1]}, pts);
      },
      {0.0, 0.0}, 2.0, 41, 12, &best);
  EXPECT_NEAR(r.gamma, best, 1e-3);
}

TEST(SynthTime, NonCausalNeverWorse) {
  std::mt19937_64 rng(41);
  const LiftedUncertainPlant pl = random_plant(rng, 2, 2);
  TimeSynthesisProblem causal{pl, LiftedFilter::identity(2), LiftedFilter::decision(2, true), {}};
  TimeSynthesisProblem full{pl, LiftedFilter::identity(2), LiftedFilter::decision(2, false), {}};
  const SynthesisResult rc = synth_time(causal);
  const SynthesisResult rf = synth_time(full);
  EXPECT_EQ(rc.gains.size(), 2u);
  EXPECT_EQ(rf.gains.size(), 3u);
  EXPECT_LE(rf.gamma, rc.gamma + 1e-6);
}

TEST(SynthTime, Rejections) {
  const std::vector<std::string> none;
  std::vector<AffinePoly> nine(9, cst(0.0, none));
  nine[0] = cst(1.0, none);
  TimeSynthesisProblem big{plant_of(nine, none), LiftedFilter::identity(9), LiftedFilter::decision(9, true), {}};
  EXPECT_THROW(synth_time(big), InvalidProblem);

  TimeSynthesisProblem sing{plant_of({lam(0) - lam(1), cst(0.2)}, kLam), LiftedFilter::identity(2),
                            LiftedFilter::decision(2, true), {}};
  EXPECT_THROW(synth_time(sing), SingularPlant);

  LiftedFilter qfree = LiftedFilter::identity(2);
  qfree.free[1] = true;
  TimeSynthesisProblem qdec{plant_of({cst(1.0), cst(0.1)}, kLam), qfree, LiftedFilter::decision(2, true), {}};
  EXPECT_THROW(synth_time(qdec), InvalidProblem);
}
