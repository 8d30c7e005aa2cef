#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "ilcsos/poly.hpp"

namespace ilcsos {

// Finite Laurent polynomial sum_r c_r z^r whose coefficients are AffinePoly
// over a common variable list (typically the simplex variables).
class ZLaurent {
 public:
  ZLaurent() = default;
  explicit ZLaurent(std::vector<std::string> coeff_vars);

  static ZLaurent monomial(std::vector<std::string> coeff_vars, int power, const AffinePoly& c);
  static ZLaurent monomial(std::vector<std::string> coeff_vars, int power, double c);
  // sum_i coeffs[i] z^i
  static ZLaurent polynomial(std::vector<std::string> coeff_vars, const std::vector<AffinePoly>& coeffs);

  const std::vector<std::string>& coeff_vars() const { return vars_; }
  const std::map<int, AffinePoly>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int min_power() const;
  int max_power() const;
  bool has_decision() const;

  void add(int power, const AffinePoly& c);

  std::complex<double> evaluate(std::complex<double> z, std::span<const double> point,
                                std::span<const double> decision = {}) const;

  ZLaurent& operator+=(const ZLaurent& o);
  ZLaurent& operator-=(const ZLaurent& o);
  friend ZLaurent operator+(ZLaurent a, const ZLaurent& b) { return a += b; }
  friend ZLaurent operator-(ZLaurent a, const ZLaurent& b) { return a -= b; }
  friend ZLaurent operator*(const ZLaurent& a, const ZLaurent& b);

 private:
  std::vector<std::string> vars_;
  std::map<int, AffinePoly> coeffs_;
};

// num(z) / den(z) with a decision-free denominator.
struct ZRational {
  ZLaurent num;
  ZLaurent den;

  std::complex<double> evaluate(std::complex<double> z, std::span<const double> point,
                                std::span<const double> decision = {}) const;
};

// (re + j im) / den with den real and decision-free.
struct RationalizedForm {
  ComplexPolyPair num;
  AffinePoly den;
};

// hom(G): lifts every entry to the common degree d (max entry degree in the
// simplex variables) by multiplying with powers of sum(lambda).
PolyMatrix homogenize(const PolyMatrix& g, const std::vector<std::string>& simplex_vars);
AffinePoly homogenize(const AffinePoly& p, const std::vector<std::string>& simplex_vars, int degree);

// G(lambda) -> G(lambda^2) on the listed variables.
PolyMatrix substitute_squares(const PolyMatrix& g, const std::vector<std::string>& vars);
AffinePoly substitute_squares(const AffinePoly& p, const std::vector<std::string>& vars);

// (sum_i v_i^2)^power over the listed variables, embedded in `all_vars`.
AffinePoly squared_norm_power(const std::vector<std::string>& all_vars,
                              const std::vector<std::string>& vars, int power);

// z = phi(x) = (1 - x^2 + 2jx) / (1 + x^2). The result is over
// [x_name] + coefficient variables and satisfies num/den == F(phi(x)).
RationalizedForm circle_rationalize_single(const ZRational& f, const std::string& x_name = "x");

// z = x1 + j x2 with z^-1 = x1 - j x2 (valid on x1^2 + x2^2 = 1). The result
// is over [x1_name, x2_name] + coefficient variables, reduced modulo the
// circle so every monomial has x2-degree <= 1.
RationalizedForm circle_rationalize_xy(const ZRational& f, const std::string& x1_name = "x1",
                                       const std::string& x2_name = "x2");

// Replaces x2^2 by 1 - x1^2 until every x2 exponent is 0 or 1.
AffinePoly reduce_on_circle(const AffinePoly& p, const std::string& x1_name, const std::string& x2_name);

// (1 + x^2)^D * G((1 - x^2)/(1 + x^2), 2x/(1 + x^2)) with D the total degree
// of G in (x1, x2); x takes the place of x1 and x2 is removed. Returns D
// through `clearing_degree` when non-null.
PolyMatrix x_parameterize(const PolyMatrix& g, const std::string& x1_name, const std::string& x2_name,
                          const std::string& x_name = "x", int* clearing_degree = nullptr);

struct ToeplitzDetAdj {
  AffinePoly det;
  PolyMatrix adj;
};

// det(P) and adj(P) of a decision-free lower-triangular Toeplitz matrix,
// built from the inverse-series recursion scaled by p1^N.
ToeplitzDetAdj triangular_toeplitz_det_adj(const PolyMatrix& p);

}  // namespace ilcsos
