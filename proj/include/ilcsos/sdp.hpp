#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ilcsos {

// coef * X_block(row, col) with row <= col. For row < col the term stands for
// the symmetric pair, i.e. it contributes coef * X(row, col) once.
struct GramTerm {
  int block = 0;
  int row = 0;
  int col = 0;
  double coef = 0.0;
};

struct ScalarTerm {
  int index = 0;
  double coef = 0.0;
};

struct SdpEquality {
  std::vector<GramTerm> gram;
  std::vector<ScalarTerm> scalars;
  double rhs = 0.0;
};

// minimize  objective . y + objective_constant
// s.t.      sum gram terms + sum scalar terms = rhs   (one row per equality)
//           every block X_b is symmetric PSD; y is free.
// Blocks of dimension 1 act as nonnegative slacks.
struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<std::string> scalar_names;
  std::vector<double> objective;
  double objective_constant = 0.0;
  std::vector<SdpEquality> equalities;

  int num_scalars() const { return static_cast<int>(scalar_names.size()); }
  int add_block(int dim);
  int add_scalar(std::string name, double cost = 0.0);
  // Throws InvalidProblem on inconsistent indices or dimensions.
  void validate() const;
  // Moves scalar `index` to the right-hand side at `value`; the scalar stays
  // declared but no longer appears in any equality or in the objective.
  SdpProblem with_fixed_scalar(int index, double value) const;
};

enum class SdpStatus { optimal, infeasible, unbounded, numerical_failure };

const char* to_string(SdpStatus s);

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  double objective_value = 0.0;
  std::vector<Eigen::MatrixXd> gram_values;
  std::vector<double> scalar_values;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool used_bisection = false;
  std::string message;
};

struct BisectionSpec {
  int scalar = 0;
  double lo = 0.0;
  double hi = 1.0;
  double width = 1e-5;
};

struct SdpOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iter = 200;
  // Used when the direct solve ends in numerical_failure (and by
  // solve_by_bisection directly).
  std::optional<BisectionSpec> bisection;
  bool verbose = false;
};

// Linearly dependent equality rows removed; nullopt when the rows are
// independent or (with *inconsistent set) contradictory.
std::optional<SdpProblem> drop_dependent_equalities(const SdpProblem& problem, bool* inconsistent = nullptr);

// Direct primal-dual interior-point solve. On numerical_failure it retries
// without dependent equalities, then falls back to bisection on
// options.bisection.
SdpSolution solve(const SdpProblem& problem, const SdpOptions& options = {});

// Infeasible-start primal-dual path following (HKM direction, Mehrotra
// predictor-corrector).
SdpSolution solve_interior_point(const SdpProblem& problem, const SdpOptions& options = {});

// Bisection on one scalar with objective weight > 0. Each step fixes the scalar
// and solves min s s.t. X - s I feasible, s >= -1; the point is feasible when
// s* <= 0.
SdpSolution solve_by_bisection(const SdpProblem& problem, const BisectionSpec& spec,
                               const SdpOptions& options = {});

// Sparse text exchange format, one line per equality.
void write_sdp_text(std::ostream& os, const SdpProblem& problem);
SdpProblem read_sdp_text(std::istream& is);
// Structured (JSON) solution report.
std::string solution_report(const SdpProblem& problem, const SdpSolution& solution);

}  // namespace ilcsos
