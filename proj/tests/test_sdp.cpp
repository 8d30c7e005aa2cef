#include <gtest/gtest.h>
#include <Eigen/Eigenvalues>
#include <random>
#include <sstream>

#include "ilcsos/errors.hpp"
#include "ilcsos/sdp.hpp"
using namespace ilcsos;
TEST(Sdp, ScalarCone) {
  SdpProblem pb;
  pb.add_block(1);
  int t = pb.add_scalar("t", 1.0);
  pb.equalities.push_back({{{0, 0, 0, 1.0}}, {{t, -1.0}}, 0.0});
  auto s = solve(pb);
  EXPECT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective_value, 0.0, 1e-7);
}
TEST(Sdp, TwoByTwo) {
  SdpProblem pb;
  pb.add_block(2);
  int t = pb.add_scalar("t", 1.0);
  pb.equalities.push_back({{{0, 0, 0, 1.0}}, {{t, -1.0}}, 0.0});
  pb.equalities.push_back({{{0, 1, 1, 1.0}}, {{t, -1.0}}, 0.0});
  pb.equalities.push_back({{{0, 0, 1, 1.0}}, {}, 1.0});
  auto s = solve(pb);
  EXPECT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-7);
  BisectionSpec b{t, 0.0, 4.0, 1e-5};
  auto sb = solve_by_bisection(pb, b);
  EXPECT_EQ(sb.status, SdpStatus::optimal);
  EXPECT_NEAR(sb.objective_value, 1.0, 2e-5);
}
TEST(Sdp, Infeasible) {
  SdpProblem pb;
  pb.add_block(1);
  pb.equalities.push_back({{{0, 0, 0, 1.0}}, {}, -1.0});
  auto s = solve(pb);
  EXPECT_EQ(s.status, SdpStatus::infeasible) << s.message;
}

namespace {

// Random feasible SDP: X0 PSD gives b; objective from a dual-feasible point.
SdpProblem random_problem(std::uint64_t seed, int n, int m) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  SdpProblem pb;
  pb.add_block(n);
  const int t = pb.add_scalar("t", 1.0);
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = g(rng);
  const Eigen::MatrixXd X0 = R * R.transpose() + Eigen::MatrixXd::Identity(n, n);
  // t = trace(X); fix a few entries.
  SdpEquality tr;
  for (int i = 0; i < n; ++i) tr.gram.push_back({0, i, i, 1.0});
  tr.scalars.push_back({t, -1.0});
  pb.equalities.push_back(tr);
  for (int k = 0; k < m; ++k) {
    const int i = static_cast<int>(rng() % static_cast<unsigned>(n));
    const int j = i + static_cast<int>(rng() % static_cast<unsigned>(n - i));
    if (i == j) continue;
    pb.equalities.push_back({{{0, i, j, 2.0}}, {}, 2.0 * X0(i, j)});
  }
  return pb;
}

}  // namespace

TEST(Sdp, OptimalGramIsPsdAndDeterministic) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const SdpProblem pb = random_problem(s, 5, 6);
    const SdpSolution a = solve(pb);
    const SdpSolution b = solve(pb);
    ASSERT_EQ(a.status, SdpStatus::optimal) << "seed " << s << ": " << a.message;
    EXPECT_LE(a.primal_residual, 1e-8);
    const double mineig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a.gram_values[0]).eigenvalues().minCoeff();
    EXPECT_GE(mineig, -1e-8);
    EXPECT_EQ(a.objective_value, b.objective_value);
  }
}

TEST(Sdp, BisectionAgreesWithDirect) {
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const SdpProblem pb = random_problem(s, 4, 4);
    const SdpSolution d = solve(pb);
    ASSERT_EQ(d.status, SdpStatus::optimal);
    const BisectionSpec spec{0, 0.0, 4.0 * d.objective_value + 1.0, 1e-6};
    const SdpSolution b = solve_by_bisection(pb, spec);
    ASSERT_EQ(b.status, SdpStatus::optimal) << b.message;
    EXPECT_TRUE(b.used_bisection);
    // Bisection reports the feasible end of the final bracket.
    EXPECT_GE(b.objective_value, d.objective_value - 1e-6);
    EXPECT_LE(b.objective_value, d.objective_value + 2.0 * spec.width);
  }
}

TEST(Sdp, UnboundedDetected) {
  SdpProblem pb;
  pb.add_block(1);
  const int t = pb.add_scalar("t", 1.0);
  pb.equalities.push_back({{{0, 0, 0, 1.0}}, {{t, 1.0}}, 0.0});  // t = -X, X >= 0
  const SdpSolution s = solve(pb);
  EXPECT_EQ(s.status, SdpStatus::unbounded) << s.message;
}

TEST(Sdp, ValidateRejectsBadIndices) {
  SdpProblem pb;
  pb.add_block(2);
  pb.equalities.push_back({{{0, 1, 0, 1.0}}, {}, 0.0});
  EXPECT_THROW(pb.validate(), InvalidProblem);
  SdpProblem q;
  q.add_block(2);
  q.equalities.push_back({{{1, 0, 0, 1.0}}, {}, 0.0});
  EXPECT_THROW(q.validate(), InvalidProblem);
}

TEST(SdpText, RoundTrip) {
  const SdpProblem pb = random_problem(9, 4, 5);
  std::stringstream ss;
  write_sdp_text(ss, pb);
  const SdpProblem back = read_sdp_text(ss);
  ASSERT_EQ(back.block_dims, pb.block_dims);
  ASSERT_EQ(back.scalar_names, pb.scalar_names);
  ASSERT_EQ(back.equalities.size(), pb.equalities.size());
  for (std::size_t e = 0; e < pb.equalities.size(); ++e) {
    EXPECT_EQ(back.equalities[e].rhs, pb.equalities[e].rhs);
    ASSERT_EQ(back.equalities[e].gram.size(), pb.equalities[e].gram.size());
    for (std::size_t k = 0; k < pb.equalities[e].gram.size(); ++k) {
      EXPECT_EQ(back.equalities[e].gram[k].coef, pb.equalities[e].gram[k].coef);
      EXPECT_EQ(back.equalities[e].gram[k].row, pb.equalities[e].gram[k].row);
    }
  }
  EXPECT_EQ(solve(back).objective_value, solve(pb).objective_value);
}

TEST(SdpText, MalformedInputRejected) {
  std::stringstream ss("blocks 1 2\nscalars 0\nconstant 0\nequalities 1\ne 1.0 1 0 0 0 5 1.0\n");
  EXPECT_THROW(read_sdp_text(ss), InvalidProblem);
}

TEST(SdpReport, ContainsStatusAndScalars) {
  SdpProblem pb;
  pb.add_block(1);
  const int t = pb.add_scalar("t", 1.0);
  pb.equalities.push_back({{{0, 0, 0, 1.0}}, {{t, -1.0}}, -2.0});
  const std::string rep = solution_report(pb, solve(pb));
  EXPECT_NE(rep.find("\"status\": \"optimal\""), std::string::npos) << rep;
  EXPECT_NE(rep.find("\"t\""), std::string::npos);
}

TEST(Sdp, DependentEqualitiesAreDropped) {
  SdpProblem pb;
  pb.add_block(2);
  const int t = pb.add_scalar("t", 1.0);
  pb.equalities.push_back({{{0, 0, 0, 1.0}}, {{t, -1.0}}, 0.0});
  pb.equalities.push_back({{{0, 1, 1, 1.0}}, {{t, -1.0}}, 0.0});
  pb.equalities.push_back({{{0, 0, 1, 1.0}}, {}, 1.0});
  pb.equalities.push_back({{{0, 0, 1, 2.0}}, {}, 2.0});
  const auto reduced = drop_dependent_equalities(pb);
  ASSERT_TRUE(reduced.has_value());
  EXPECT_EQ(reduced->equalities.size(), 3u);
  const SdpSolution s = solve(pb);
  ASSERT_EQ(s.status, SdpStatus::optimal) << s.message;
  EXPECT_NEAR(s.objective_value, 1.0, 1e-7);

  pb.equalities.back().rhs = 3.0;
  bool inconsistent = false;
  EXPECT_FALSE(drop_dependent_equalities(pb, &inconsistent).has_value());
  EXPECT_TRUE(inconsistent);
  EXPECT_NE(solve(pb).status, SdpStatus::optimal);
}
