#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ilcsos/affine.hpp"
#include "ilcsos/poly.hpp"
#include "ilcsos/sdp.hpp"

namespace ilcsos {

// Variables whose monomial degree is bounded jointly.
struct BasisGroup {
  std::vector<int> vars;  // indices into the variable list
  int min_degree = 0;
  int max_degree = 0;
};

// Optional per-variable restrictions. parity[v] in {-1 (any), 0 (even), 1 (odd)};
// max_exponent[v] < 0 means unbounded.
struct BasisHints {
  std::vector<int> parity;
  std::vector<int> min_exponent;
  std::vector<int> max_exponent;
};

// Monomials whose degree in each group lies within the group's range and that
// respect the hints. Variables outside every group get exponent 0. Ordered by
// total degree, then descending lexicographic exponent.
std::vector<Exponent> monomial_basis(int num_vars, const std::vector<BasisGroup>& groups,
                                     const BasisHints& hints = {});

// "S is SOS" for a symmetric PolyMatrix S affine in decision variables.
struct SosConstraint {
  PolyMatrix S;
  // Variable groups (names) that drive the per-row degree ranges. Empty means
  // one group with every variable.
  std::vector<std::vector<std::string>> groups;
  // Split the Gram matrix by exponent parity of variables in which S is even.
  bool use_parity = true;
};

// a(y) >= 0 with a affine in the decision variables.
struct LinearInequality {
  AffineCoeff expr;
};

struct SosProgram {
  const DecisionSpace* space = nullptr;
  std::vector<SosConstraint> constraints;
  std::vector<LinearInequality> inequalities;
  AffineCoeff objective;  // minimized
};

// One Gram block: rows index (matrix row, monomial) pairs.
struct GramBlockLayout {
  int constraint = 0;
  std::vector<int> matrix_row;
  std::vector<Exponent> monomial;
};

struct CompiledSos {
  SdpProblem sdp;  // scalar i is decision variable i
  std::vector<GramBlockLayout> layouts;  // one per SOS Gram block, same order as sdp blocks
  std::vector<double> scales;            // per constraint
  std::vector<int> equality_counts;      // per constraint
};

// Coefficient matching: one equality per (monomial, upper-triangle position)
// reachable by products of basis monomials. Throws BasisDeficiency when a
// monomial of S cannot be produced.
CompiledSos compile_sos(const SosProgram& program);

struct SosCertificate {
  std::vector<Eigen::MatrixXd> gram;  // unscaled, per block
  std::vector<GramBlockLayout> basis;
  double residual = 0.0;
};

// Certificate for constraint `index` of a compiled program.
SosCertificate extract_certificate(const CompiledSos& compiled, const SdpSolution& solution, int index);

struct CertificateReport {
  bool pass = false;
  double residual = 0.0;
  double scale = 0.0;
  double min_eigenvalue = 0.0;
};

// Recomputes S(assignment) - basis' G basis from scratch.
CertificateReport check_certificate(const SosConstraint& constraint, std::span<const double> assignment,
                                    const SosCertificate& certificate);

// S(assignment) reconstructed from a certificate (the Gram expansion).
PolyMatrix gram_expansion(const std::vector<std::string>& vars, int dim, const SosCertificate& certificate);

}  // namespace ilcsos
