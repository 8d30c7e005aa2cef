#include <Eigen/Eigenvalues>
#include <cstdio>
#include <istream>
#include "json.hpp"
#include <ostream>
#include <sstream>

#include "ilcsos/errors.hpp"
#include "ilcsos/sdp.hpp"

namespace ilcsos {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T expect(std::istream& is, const char* what) {
  T v{};
  if (!(is >> v)) throw InvalidProblem(std::string("sdp text: expected ") + what);
  return v;
}

void expect_keyword(std::istream& is, const std::string& kw) {
  std::string tok;
  if (!(is >> tok) || tok != kw) throw InvalidProblem("sdp text: expected keyword '" + kw + "'");
}

}  // namespace

// Format:
//   blocks <nb> <d_1> ... <d_nb>
//   scalars <nf>
//   <name> <objective coefficient>          (nf lines)
//   constant <objective constant>
//   equalities <m>
//   e <rhs> <ng> <ns> {<block> <row> <col> <coef>}*ng {<scalar> <coef>}*ns
void write_sdp_text(std::ostream& os, const SdpProblem& problem) {
  os << "blocks " << problem.block_dims.size();
  for (int d : problem.block_dims) os << ' ' << d;
  os << "\nscalars " << problem.num_scalars() << '\n';
  for (int i = 0; i < problem.num_scalars(); ++i) {
    os << problem.scalar_names[static_cast<std::size_t>(i)] << ' ' << num(problem.objective[static_cast<std::size_t>(i)]) << '\n';
  }
  os << "constant " << num(problem.objective_constant) << '\n';
  os << "equalities " << problem.equalities.size() << '\n';
  for (const auto& eq : problem.equalities) {
    os << "e " << num(eq.rhs) << ' ' << eq.gram.size() << ' ' << eq.scalars.size();
    for (const auto& t : eq.gram) os << ' ' << t.block << ' ' << t.row << ' ' << t.col << ' ' << num(t.coef);
    for (const auto& s : eq.scalars) os << ' ' << s.index << ' ' << num(s.coef);
    os << '\n';
  }
}

SdpProblem read_sdp_text(std::istream& is) {
  SdpProblem pb;
  expect_keyword(is, "blocks");
  const auto nb = expect<long>(is, "block count");
  if (nb < 0) throw InvalidProblem("sdp text: negative block count");
  for (long i = 0; i < nb; ++i) pb.block_dims.push_back(expect<int>(is, "block dimension"));
  expect_keyword(is, "scalars");
  const auto nf = expect<long>(is, "scalar count");
  if (nf < 0) throw InvalidProblem("sdp text: negative scalar count");
  for (long i = 0; i < nf; ++i) {
    auto name = expect<std::string>(is, "scalar name");
    pb.add_scalar(std::move(name), expect<double>(is, "objective coefficient"));
  }
  expect_keyword(is, "constant");
  pb.objective_constant = expect<double>(is, "objective constant");
  expect_keyword(is, "equalities");
  const auto m = expect<long>(is, "equality count");
  if (m < 0) throw InvalidProblem("sdp text: negative equality count");
  pb.equalities.reserve(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) {
    expect_keyword(is, "e");
    SdpEquality eq;
    eq.rhs = expect<double>(is, "rhs");
    const auto ng = expect<long>(is, "gram term count");
    const auto ns = expect<long>(is, "scalar term count");
    if (ng < 0 || ns < 0) throw InvalidProblem("sdp text: negative term count");
    for (long t = 0; t < ng; ++t) {
      GramTerm g;
      g.block = expect<int>(is, "block index");
      g.row = expect<int>(is, "row");
      g.col = expect<int>(is, "col");
      g.coef = expect<double>(is, "coefficient");
      eq.gram.push_back(g);
    }
    for (long t = 0; t < ns; ++t) {
      ScalarTerm s;
      s.index = expect<int>(is, "scalar index");
      s.coef = expect<double>(is, "coefficient");
      eq.scalars.push_back(s);
    }
    pb.equalities.push_back(std::move(eq));
  }
  pb.validate();
  return pb;
}

std::string solution_report(const SdpProblem& problem, const SdpSolution& solution) {
  nlohmann::ordered_json j;
  j["status"] = to_string(solution.status);
  j["objective_value"] = solution.objective_value;
  j["iterations"] = solution.iterations;
  j["used_bisection"] = solution.used_bisection;
  j["gap"] = solution.gap;
  j["primal_residual"] = solution.primal_residual;
  j["dual_residual"] = solution.dual_residual;
  j["message"] = solution.message;
  nlohmann::ordered_json scalars = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < solution.scalar_values.size() && i < problem.scalar_names.size(); ++i) {
    scalars[problem.scalar_names[i]] = solution.scalar_values[i];
  }
  j["scalars"] = scalars;
  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (const auto& g : solution.gram_values) {
    nlohmann::ordered_json b;
    b["dim"] = g.rows();
    double min_eig = 0.0;
    if (g.rows() > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
      min_eig = es.eigenvalues().minCoeff();
    }
    b["min_eigenvalue"] = min_eig;
    blocks.push_back(b);
  }
  j["blocks"] = blocks;
  return j.dump(2);
}

}  // namespace ilcsos
