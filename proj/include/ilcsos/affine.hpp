#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace ilcsos {

// Registry of named decision variables (eta, filter gains, ...). Ids are the
// positions in the registry and index the value vectors passed to evaluate().
class DecisionSpace {
 public:
  int add(std::string name);
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }
  // -1 when absent.
  int find(const std::string& name) const;

 private:
  std::vector<std::string> names_;
};

// constant + sum_i terms[i] * v_i over decision variables v. Products of two
// non-constant coefficients are rejected with AffinityError.
class AffineCoeff {
 public:
  AffineCoeff() = default;
  AffineCoeff(double constant) : constant_(constant) {}  // NOLINT: implicit by intent

  static AffineCoeff variable(int id, double scale = 1.0);

  double constant() const { return constant_; }
  const std::map<int, double>& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }
  double coefficient(int id) const;

  double evaluate(std::span<const double> values) const;
  // Largest magnitude among the constant and the variable coefficients.
  double max_abs() const;
  // Drops variable coefficients with |c| <= tol and zeroes a small constant.
  void prune(double tol);
  bool is_zero() const { return constant_ == 0.0 && terms_.empty(); }

  AffineCoeff& operator+=(const AffineCoeff& other);
  AffineCoeff& operator-=(const AffineCoeff& other);
  AffineCoeff& operator*=(double s);
  AffineCoeff operator-() const;

  friend AffineCoeff operator+(AffineCoeff a, const AffineCoeff& b) { return a += b; }
  friend AffineCoeff operator-(AffineCoeff a, const AffineCoeff& b) { return a -= b; }
  friend AffineCoeff operator*(AffineCoeff a, double s) { return a *= s; }
  friend AffineCoeff operator*(double s, AffineCoeff a) { return a *= s; }
  // Throws AffinityError unless at least one side is constant.
  friend AffineCoeff operator*(const AffineCoeff& a, const AffineCoeff& b);

  // Replaces the listed variables by fixed values, keeping the rest.
  AffineCoeff substitute(const std::map<int, double>& values) const;

 private:
  double constant_ = 0.0;
  std::map<int, double> terms_;
};

}  // namespace ilcsos
