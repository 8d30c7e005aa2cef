#include "ilcsos/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ilcsos/errors.hpp"

namespace ilcsos {

// ---------------------------------------------------------------------------
// ZLaurent

ZLaurent::ZLaurent(std::vector<std::string> coeff_vars) : vars_(std::move(coeff_vars)) {}

ZLaurent ZLaurent::monomial(std::vector<std::string> coeff_vars, int power, const AffinePoly& c) {
  ZLaurent z(std::move(coeff_vars));
  z.add(power, c);
  return z;
}

ZLaurent ZLaurent::monomial(std::vector<std::string> coeff_vars, int power, double c) {
  auto poly = AffinePoly::constant(coeff_vars, c);
  return monomial(std::move(coeff_vars), power, poly);
}

ZLaurent ZLaurent::polynomial(std::vector<std::string> coeff_vars, const std::vector<AffinePoly>& coeffs) {
  ZLaurent z(std::move(coeff_vars));
  for (std::size_t i = 0; i < coeffs.size(); ++i) z.add(static_cast<int>(i), coeffs[i]);
  return z;
}

int ZLaurent::min_power() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
int ZLaurent::max_power() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

bool ZLaurent::has_decision() const {
  return std::any_of(coeffs_.begin(), coeffs_.end(), [](const auto& kv) { return kv.second.has_decision(); });
}

void ZLaurent::add(int power, const AffinePoly& c) {
  if (c.variables() != vars_) throw VariableMismatch("Laurent coefficient uses a different variable list");
  if (c.is_zero()) return;
  auto [it, inserted] = coeffs_.try_emplace(power, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

std::complex<double> ZLaurent::evaluate(std::complex<double> z, std::span<const double> point,
                                        std::span<const double> decision) const {
  std::complex<double> v = 0.0;
  for (const auto& [r, c] : coeffs_) v += c.evaluate(point, decision) * std::pow(z, r);
  return v;
}

ZLaurent& ZLaurent::operator+=(const ZLaurent& o) {
  for (const auto& [r, c] : o.coeffs_) add(r, c);
  return *this;
}

ZLaurent& ZLaurent::operator-=(const ZLaurent& o) {
  for (const auto& [r, c] : o.coeffs_) add(r, -c);
  return *this;
}

ZLaurent operator*(const ZLaurent& a, const ZLaurent& b) {
  if (a.vars_ != b.vars_) throw VariableMismatch("Laurent product over different variable lists");
  ZLaurent out(a.vars_);
  for (const auto& [ra, ca] : a.coeffs_) {
    for (const auto& [rb, cb] : b.coeffs_) out.add(ra + rb, ca * cb);
  }
  return out;
}

std::complex<double> ZRational::evaluate(std::complex<double> z, std::span<const double> point,
                                         std::span<const double> decision) const {
  return num.evaluate(z, point, decision) / den.evaluate(z, point);
}

// ---------------------------------------------------------------------------
// Simplex transformations

AffinePoly homogenize(const AffinePoly& p, const std::vector<std::string>& simplex_vars, int degree) {
  const auto idx = p.var_indices(simplex_vars);
  AffinePoly sum(p.variables());
  for (int i : idx) {
    Exponent e(static_cast<std::size_t>(p.num_vars()), 0);
    e[static_cast<std::size_t>(i)] = 1;
    sum.add_term(e, 1.0);
  }
  std::vector<AffinePoly> sum_powers{AffinePoly::constant(p.variables(), 1.0)};
  AffinePoly out(p.variables());
  for (const auto& [e, c] : p.terms()) {
    int d = 0;
    for (int i : idx) d += e[static_cast<std::size_t>(i)];
    const int lift = degree - d;
    if (lift < 0) throw InvalidProblem("homogenization degree below the polynomial degree");
    while (static_cast<int>(sum_powers.size()) <= lift) sum_powers.push_back(sum_powers.back() * sum);
    out += AffinePoly::monomial(p.variables(), e, c) * sum_powers[static_cast<std::size_t>(lift)];
  }
  return out;
}

PolyMatrix homogenize(const PolyMatrix& g, const std::vector<std::string>& simplex_vars) {
  if (simplex_vars.empty()) throw InvalidProblem("homogenize needs at least one simplex variable");
  AffinePoly probe(g.variables());
  const auto idx = probe.var_indices(simplex_vars);
  const int d = std::max(0, g.degree(idx));
  PolyMatrix out(g.rows(), g.cols(), g.variables());
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) out(i, j) = homogenize(g(i, j), simplex_vars, d);
  }
  return out;
}

AffinePoly substitute_squares(const AffinePoly& p, const std::vector<std::string>& vars) {
  const auto idx = p.var_indices(vars);
  AffinePoly out(p.variables());
  for (const auto& [e, c] : p.terms()) {
    Exponent ne = e;
    for (int i : idx) ne[static_cast<std::size_t>(i)] *= 2;
    out.add_term(ne, c);
  }
  return out;
}

PolyMatrix substitute_squares(const PolyMatrix& g, const std::vector<std::string>& vars) {
  PolyMatrix out(g.rows(), g.cols(), g.variables());
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) out(i, j) = substitute_squares(g(i, j), vars);
  }
  return out;
}

AffinePoly squared_norm_power(const std::vector<std::string>& all_vars, const std::vector<std::string>& vars,
                              int power) {
  AffinePoly norm(all_vars);
  for (int i : norm.var_indices(vars)) {
    Exponent e(all_vars.size(), 0);
    e[static_cast<std::size_t>(i)] = 2;
    norm.add_term(e, 1.0);
  }
  return norm.pow(power);
}

// ---------------------------------------------------------------------------
// Unit-circle rationalization

namespace {

std::vector<std::string> prepend(const std::vector<std::string>& head, const std::vector<std::string>& tail) {
  std::vector<std::string> out = head;
  for (const auto& v : tail) {
    if (std::find(head.begin(), head.end(), v) != head.end()) {
      throw VariableMismatch("variable '" + v + "' clashes with the circle parameter");
    }
    out.push_back(v);
  }
  return out;
}

// Points used to probe the coefficient variables for unit-circle poles: the
// single empty point when there are none, else simplex vertices plus a grid.
std::vector<std::vector<double>> coefficient_probe_points(std::size_t n) {
  if (n == 0) return {{}};
  std::vector<std::vector<double>> pts;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<double> p(n, 0.0);
    p[v] = 1.0;
    pts.push_back(p);
  }
  pts.emplace_back(n, 1.0 / static_cast<double>(n));
  constexpr int kSteps = 20;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (int s = 1; s < kSteps; ++s) {
        std::vector<double> p(n, 0.0);
        p[a] = static_cast<double>(s) / kSteps;
        p[b] = 1.0 - p[a];
        pts.push_back(p);
      }
    }
  }
  return pts;
}

void check_circle_denominator(const ZLaurent& den) {
  if (den.has_decision()) throw InvalidProblem("rational part denominator must be decision-free");
  if (den.is_zero()) throw DegenerateDenominator("denominator is identically zero");
  constexpr int kOmega = 2048;
  for (const auto& pt : coefficient_probe_points(den.coeff_vars().size())) {
    double scale = 0.0;
    for (const auto& [r, c] : den.coeffs()) scale += std::abs(c.evaluate(pt));
    double smallest = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kOmega; ++k) {
      const double w = std::numbers::pi * k / kOmega;
      smallest = std::min(smallest, std::abs(den.evaluate(std::polar(1.0, w), pt)));
    }
    if (!(smallest > 1e-9 * scale)) {
      throw DegenerateDenominator("plant denominator vanishes on the unit circle");
    }
  }
}

// (1 + sign*j*x)^k over `vars`, x at index 0.
ComplexPolyPair one_pm_jx_pow(const std::vector<std::string>& vars, int sign, int k) {
  ComplexPolyPair base(AffinePoly::constant(vars, 1.0), AffinePoly(vars));
  Exponent e(vars.size(), 0);
  e[0] = 1;
  base.im.add_term(e, static_cast<double>(sign));
  ComplexPolyPair out = ComplexPolyPair::real(AffinePoly::constant(vars, 1.0));
  for (int i = 0; i < k; ++i) out = out * base;
  return out;
}

// Laurent R with powers [rmin, rmax]: returns sum_r c_r (1+jx)^(r-rmin) (1-jx)^(rmax-r),
// so that R(phi(x)) = hat / ((1+jx)^(-rmin) (1-jx)^rmax).
ComplexPolyPair hat_polynomial(const ZLaurent& r, const std::vector<std::string>& vars) {
  const int rmin = r.min_power();
  const int rmax = r.max_power();
  ComplexPolyPair out{AffinePoly(vars), AffinePoly(vars)};
  for (const auto& [p, c] : r.coeffs()) {
    auto term = one_pm_jx_pow(vars, +1, p - rmin) * one_pm_jx_pow(vars, -1, rmax - p);
    out += term * c.embed(vars);
  }
  return out;
}

ComplexPolyPair z_power_xy(const std::vector<std::string>& vars, int power) {
  ComplexPolyPair base(AffinePoly::variable(vars, vars[0]), AffinePoly::variable(vars, vars[1]));
  if (power < 0) base = base.conj();
  ComplexPolyPair out = ComplexPolyPair::real(AffinePoly::constant(vars, 1.0));
  for (int i = 0; i < std::abs(power); ++i) out = out * base;
  return out;
}

ComplexPolyPair laurent_xy(const ZLaurent& r, const std::vector<std::string>& vars) {
  ComplexPolyPair out{AffinePoly(vars), AffinePoly(vars)};
  for (const auto& [p, c] : r.coeffs()) out += z_power_xy(vars, p) * c.embed(vars);
  return out;
}

}  // namespace

RationalizedForm circle_rationalize_single(const ZRational& f, const std::string& x_name) {
  if (f.num.coeff_vars() != f.den.coeff_vars()) throw VariableMismatch("numerator and denominator variables differ");
  check_circle_denominator(f.den);
  const auto vars = prepend({x_name}, f.num.coeff_vars());

  if (f.num.is_zero()) {
    return {ComplexPolyPair(AffinePoly(vars), AffinePoly(vars)),
            AffinePoly::constant(vars, 1.0)};
  }
  const auto n_hat = hat_polynomial(f.num, vars);
  const auto d_hat = hat_polynomial(f.den, vars);
  // F = n_hat (1+jx)^p (1-jx)^q / d_hat
  const int p = -f.den.min_power() + f.num.min_power();
  const int q = f.den.max_power() - f.num.max_power();
  const int plus_power = std::max(p, 0) + std::max(-q, 0);
  const int minus_power = std::max(q, 0) + std::max(-p, 0);
  const int circle_power = std::max(-p, 0) + std::max(-q, 0);

  RationalizedForm out;
  out.num = n_hat * d_hat.conj() * one_pm_jx_pow(vars, +1, plus_power) * one_pm_jx_pow(vars, -1, minus_power);
  AffinePoly one_plus_x2 = AffinePoly::constant(vars, 1.0);
  {
    Exponent e(vars.size(), 0);
    e[0] = 2;
    one_plus_x2.add_term(e, 1.0);
  }
  out.den = (d_hat.re * d_hat.re + d_hat.im * d_hat.im) * one_plus_x2.pow(circle_power);
  return out;
}

AffinePoly reduce_on_circle(const AffinePoly& p, const std::string& x1_name, const std::string& x2_name) {
  const auto i1 = static_cast<std::size_t>(p.var_index(x1_name));
  const auto i2 = static_cast<std::size_t>(p.var_index(x2_name));
  const auto& vars = p.variables();
  AffinePoly one_minus_x1sq = AffinePoly::constant(vars, 1.0);
  {
    Exponent e(vars.size(), 0);
    e[i1] = 2;
    one_minus_x1sq.add_term(e, -1.0);
  }
  std::vector<AffinePoly> powers{AffinePoly::constant(vars, 1.0)};
  AffinePoly out(vars);
  for (const auto& [e, c] : p.terms()) {
    const int half = e[i2] / 2;
    if (half == 0) {
      out.add_term(e, c);
      continue;
    }
    Exponent ne = e;
    ne[i2] = e[i2] % 2;
    while (static_cast<int>(powers.size()) <= half) powers.push_back(powers.back() * one_minus_x1sq);
    out += AffinePoly::monomial(vars, ne, c) * powers[static_cast<std::size_t>(half)];
  }
  out.prune();
  return out;
}

RationalizedForm circle_rationalize_xy(const ZRational& f, const std::string& x1_name, const std::string& x2_name) {
  if (f.num.coeff_vars() != f.den.coeff_vars()) throw VariableMismatch("numerator and denominator variables differ");
  check_circle_denominator(f.den);
  const auto vars = prepend({x1_name, x2_name}, f.num.coeff_vars());

  const auto n_xy = laurent_xy(f.num, vars);
  const auto d_xy = laurent_xy(f.den, vars);
  const auto prod = n_xy * d_xy.conj();
  RationalizedForm out;
  out.num = ComplexPolyPair(reduce_on_circle(prod.re, x1_name, x2_name),
                            reduce_on_circle(prod.im, x1_name, x2_name));
  out.den = reduce_on_circle(d_xy.re * d_xy.re + d_xy.im * d_xy.im, x1_name, x2_name);
  return out;
}

PolyMatrix x_parameterize(const PolyMatrix& g, const std::string& x1_name, const std::string& x2_name,
                          const std::string& x_name, int* clearing_degree) {
  const auto& vars = g.variables();
  AffinePoly probe(vars);
  const auto i1 = static_cast<std::size_t>(probe.var_index(x1_name));
  const auto i2 = static_cast<std::size_t>(probe.var_index(x2_name));
  const int pair[2] = {static_cast<int>(i1), static_cast<int>(i2)};
  const int d = std::max(0, g.degree(pair));
  if (clearing_degree) *clearing_degree = d;

  std::vector<std::string> new_vars;
  std::vector<int> old_to_new(vars.size(), -1);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i == i2) continue;
    old_to_new[i] = static_cast<int>(new_vars.size());
    new_vars.push_back(i == i1 ? x_name : vars[i]);
  }
  const auto ix = static_cast<std::size_t>(old_to_new[i1]);

  // Univariate helpers in x as dense coefficient vectors.
  using Uni = std::vector<double>;
  auto mul = [](const Uni& a, const Uni& b) {
    Uni c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    return c;
  };
  auto upow = [&mul](const Uni& base, int k) {
    Uni r{1.0};
    for (int i = 0; i < k; ++i) r = mul(r, base);
    return r;
  };
  const Uni one_minus{1.0, 0.0, -1.0};
  const Uni two_x{0.0, 2.0};
  const Uni one_plus{1.0, 0.0, 1.0};

  PolyMatrix out(g.rows(), g.cols(), new_vars);
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      AffinePoly acc(new_vars);
      for (const auto& [e, coeff] : g(r, c).terms()) {
        const int a = e[i1];
        const int b = e[i2];
        const Uni factor = mul(mul(upow(one_minus, a), upow(two_x, b)), upow(one_plus, d - a - b));
        Exponent ne(new_vars.size(), 0);
        for (std::size_t i = 0; i < vars.size(); ++i) {
          if (old_to_new[i] >= 0 && i != i1) ne[static_cast<std::size_t>(old_to_new[i])] = e[i];
        }
        for (std::size_t k = 0; k < factor.size(); ++k) {
          if (factor[k] == 0.0) continue;
          ne[ix] = static_cast<int>(k);
          acc.add_term(ne, coeff * factor[k]);
        }
      }
      acc.prune();
      out(r, c) = std::move(acc);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ToeplitzDetAdj triangular_toeplitz_det_adj(const PolyMatrix& p) {
  if (p.rows() != p.cols()) throw NotToeplitz("matrix is not square");
  if (p.has_decision()) throw InvalidProblem("Toeplitz determinant/adjugate requires a decision-free matrix");
  const int n = p.rows();
  const double tol = 1e-12 * std::max(1.0, p.max_abs_coefficient());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (p(i, j).max_abs_coefficient() > tol) throw NotTriangular("entry above the diagonal is nonzero");
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      if (!p(i, j).equals(p(i - j, 0), tol)) throw NotToeplitz("lower triangle is not constant along diagonals");
    }
  }
  const auto& vars = p.variables();
  const AffinePoly& p1 = p(0, 0);
  if (p1.is_zero()) throw SingularPlant("leading Markov parameter is identically zero");

  // g_0 = 1, g_k = -sum_{i=1..k} p_{i+1} g_{k-i} p1^(i-1); adj_k = g_k p1^(N-1-k).
  std::vector<AffinePoly> p1_pow{AffinePoly::constant(vars, 1.0)};
  for (int i = 1; i <= n; ++i) p1_pow.push_back(p1_pow.back() * p1);
  std::vector<AffinePoly> g{AffinePoly::constant(vars, 1.0)};
  for (int k = 1; k < n; ++k) {
    AffinePoly acc(vars);
    for (int i = 1; i <= k; ++i) acc -= p(i, 0) * g[static_cast<std::size_t>(k - i)] * p1_pow[static_cast<std::size_t>(i - 1)];
    g.push_back(acc);
  }
  ToeplitzDetAdj out{p1_pow[static_cast<std::size_t>(n)], PolyMatrix(n, n, vars)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const int k = i - j;
      out.adj(i, j) = g[static_cast<std::size_t>(k)] * p1_pow[static_cast<std::size_t>(n - 1 - k)];
    }
  }
  return out;
}

}  // namespace ilcsos
