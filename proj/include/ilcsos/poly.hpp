#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ilcsos/affine.hpp"

namespace ilcsos {

using Exponent = std::vector<int>;

// Relative tolerance used to drop coefficients after arithmetic.
inline constexpr double kPruneTolerance = 1e-12;

// Multivariate polynomial over named real variables whose coefficients are
// affine in the decision variables. Term structure is kept exact; the only
// simplification is collection of equal monomials and relative pruning.
class AffinePoly {
 public:
  using TermMap = std::map<Exponent, AffineCoeff>;

  AffinePoly() = default;
  explicit AffinePoly(std::vector<std::string> variables);

  static AffinePoly constant(std::vector<std::string> variables, const AffineCoeff& c);
  static AffinePoly monomial(std::vector<std::string> variables, Exponent e, const AffineCoeff& c);
  static AffinePoly variable(std::vector<std::string> variables, const std::string& name);

  const std::vector<std::string>& variables() const { return vars_; }
  int num_vars() const { return static_cast<int>(vars_.size()); }
  int var_index(const std::string& name) const;  // throws VariableMismatch
  std::vector<int> var_indices(std::span<const std::string> names) const;
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool has_decision() const;

  // Max total degree over all variables or over a subset of variable indices.
  // The zero polynomial has degree -1.
  int degree() const;
  int degree(std::span<const int> subset) const;
  int min_degree(std::span<const int> subset) const;
  bool is_homogeneous(std::span<const int> subset) const;

  double evaluate(std::span<const double> point, std::span<const double> decision = {}) const;
  AffineCoeff evaluate_affine(std::span<const double> point) const;
  // Fixes every decision variable; result is decision-free.
  AffinePoly assign(std::span<const double> decision) const;
  // Fixes selected decision variables only.
  AffinePoly substitute_decision(const std::map<int, double>& values) const;
  // Coefficient of a monomial (zero when absent).
  AffineCoeff coefficient(const Exponent& e) const;
  double max_abs_coefficient() const;

  void add_term(const Exponent& e, const AffineCoeff& c);
  void prune(double rel_tol = kPruneTolerance);

  // Re-expresses the polynomial over a superset / permutation of variables.
  AffinePoly embed(const std::vector<std::string>& new_vars) const;

  AffinePoly& operator+=(const AffinePoly& other);
  AffinePoly& operator-=(const AffinePoly& other);
  AffinePoly& operator*=(double s);
  AffinePoly operator-() const;
  friend AffinePoly operator+(AffinePoly a, const AffinePoly& b) { return a += b; }
  friend AffinePoly operator-(AffinePoly a, const AffinePoly& b) { return a -= b; }
  friend AffinePoly operator*(AffinePoly a, double s) { return a *= s; }
  friend AffinePoly operator*(double s, AffinePoly a) { return a *= s; }
  // Throws AffinityError when both factors carry decision variables.
  friend AffinePoly operator*(const AffinePoly& a, const AffinePoly& b);

  AffinePoly pow(int exponent) const;

  // Structural equality up to an absolute tolerance on every coefficient.
  bool equals(const AffinePoly& other, double tol = 0.0) const;

 private:
  void check_same_vars(const AffinePoly& other) const;

  std::vector<std::string> vars_;
  TermMap terms_;
};

// Dense row-major matrix of AffinePoly entries sharing one variable list.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(int rows, int cols, std::vector<std::string> variables);

  static PolyMatrix identity(int n, std::vector<std::string> variables);
  static PolyMatrix scalar(const AffinePoly& p);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<std::string>& variables() const { return vars_; }

  AffinePoly& operator()(int i, int j) { return entries_[index(i, j)]; }
  const AffinePoly& operator()(int i, int j) const { return entries_[index(i, j)]; }
  // Replaces an entry; the polynomial must share the variable list.
  void set(int i, int j, AffinePoly p);

  int degree() const;
  int degree(std::span<const int> subset) const;
  bool has_decision() const;
  // entry(i,j) == entry(j,i) term-for-term within tol.
  bool is_symmetric(double tol = 0.0) const;
  double max_abs_coefficient() const;

  PolyMatrix transpose() const;
  PolyMatrix assign(std::span<const double> decision) const;
  PolyMatrix embed(const std::vector<std::string>& new_vars) const;
  Eigen::MatrixXd evaluate(std::span<const double> point, std::span<const double> decision = {}) const;

  PolyMatrix& operator+=(const PolyMatrix& other);
  PolyMatrix& operator-=(const PolyMatrix& other);
  PolyMatrix& operator*=(double s);
  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator*(const AffinePoly& s, const PolyMatrix& m);

  // Block assembly helper: [[a, b], [c, d]].
  static PolyMatrix blocks(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& c,
                           const PolyMatrix& d);

 private:
  std::size_t index(int i, int j) const;

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::string> vars_;
  std::vector<AffinePoly> entries_;
};

// re + j*im with both parts over the same real variables.
struct ComplexPolyPair {
  AffinePoly re;
  AffinePoly im;

  ComplexPolyPair() = default;
  ComplexPolyPair(AffinePoly r, AffinePoly i);
  static ComplexPolyPair real(const AffinePoly& r);

  const std::vector<std::string>& variables() const { return re.variables(); }
  ComplexPolyPair conj() const { return {re, -im}; }
  std::complex<double> evaluate(std::span<const double> point,
                                std::span<const double> decision = {}) const;

  ComplexPolyPair& operator+=(const ComplexPolyPair& o);
  ComplexPolyPair& operator-=(const ComplexPolyPair& o);
  friend ComplexPolyPair operator+(ComplexPolyPair a, const ComplexPolyPair& b) { return a += b; }
  friend ComplexPolyPair operator-(ComplexPolyPair a, const ComplexPolyPair& b) { return a -= b; }
  friend ComplexPolyPair operator*(const ComplexPolyPair& a, const ComplexPolyPair& b);
  friend ComplexPolyPair operator*(const ComplexPolyPair& a, const AffinePoly& b);
};

}  // namespace ilcsos
