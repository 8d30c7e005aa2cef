#include "ilcsos/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ilcsos/errors.hpp"

namespace ilcsos {

namespace {

double monomial_value(const Exponent& e, std::span<const double> point) {
  double v = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (int k = 0; k < e[i]; ++k) v *= point[i];
  }
  return v;
}

int subset_degree(const Exponent& e, std::span<const int> subset) {
  int d = 0;
  for (int i : subset) d += e[static_cast<std::size_t>(i)];
  return d;
}

}  // namespace

AffinePoly::AffinePoly(std::vector<std::string> variables) : vars_(std::move(variables)) {}

AffinePoly AffinePoly::constant(std::vector<std::string> variables, const AffineCoeff& c) {
  AffinePoly p(std::move(variables));
  p.add_term(Exponent(p.vars_.size(), 0), c);
  return p;
}

AffinePoly AffinePoly::monomial(std::vector<std::string> variables, Exponent e,
                                const AffineCoeff& c) {
  AffinePoly p(std::move(variables));
  if (e.size() != p.vars_.size()) {
    throw DimensionMismatch("exponent length does not match the variable count");
  }
  p.add_term(e, c);
  return p;
}

AffinePoly AffinePoly::variable(std::vector<std::string> variables, const std::string& name) {
  AffinePoly p(std::move(variables));
  Exponent e(p.vars_.size(), 0);
  e[static_cast<std::size_t>(p.var_index(name))] = 1;
  p.add_term(e, 1.0);
  return p;
}

int AffinePoly::var_index(const std::string& name) const {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end()) throw VariableMismatch("unknown polynomial variable '" + name + "'");
  return static_cast<int>(it - vars_.begin());
}

std::vector<int> AffinePoly::var_indices(std::span<const std::string> names) const {
  std::vector<int> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(var_index(n));
  return out;
}

bool AffinePoly::has_decision() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const auto& kv) { return !kv.second.is_constant(); });
}

int AffinePoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

int AffinePoly::degree(std::span<const int> subset) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, subset_degree(e, subset));
  return d;
}

int AffinePoly::min_degree(std::span<const int> subset) const {
  if (terms_.empty()) return -1;
  int d = std::numeric_limits<int>::max();
  for (const auto& [e, c] : terms_) d = std::min(d, subset_degree(e, subset));
  return d;
}

bool AffinePoly::is_homogeneous(std::span<const int> subset) const {
  return terms_.empty() || degree(subset) == min_degree(subset);
}

double AffinePoly::evaluate(std::span<const double> point, std::span<const double> decision) const {
  if (point.size() != vars_.size()) throw DimensionMismatch("evaluation point has wrong length");
  double v = 0.0;
  for (const auto& [e, c] : terms_) {
    const double coeff = c.is_constant() ? c.constant() : c.evaluate(decision);
    v += coeff * monomial_value(e, point);
  }
  return v;
}

AffineCoeff AffinePoly::evaluate_affine(std::span<const double> point) const {
  if (point.size() != vars_.size()) throw DimensionMismatch("evaluation point has wrong length");
  AffineCoeff v;
  for (const auto& [e, c] : terms_) v += c * monomial_value(e, point);
  return v;
}

AffinePoly AffinePoly::assign(std::span<const double> decision) const {
  AffinePoly out(vars_);
  for (const auto& [e, c] : terms_) out.add_term(e, c.is_constant() ? c.constant() : c.evaluate(decision));
  out.prune();
  return out;
}

AffinePoly AffinePoly::substitute_decision(const std::map<int, double>& values) const {
  AffinePoly out(vars_);
  for (const auto& [e, c] : terms_) out.add_term(e, c.substitute(values));
  out.prune();
  return out;
}

AffineCoeff AffinePoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? AffineCoeff{} : it->second;
}

double AffinePoly::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, c.max_abs());
  return m;
}

void AffinePoly::add_term(const Exponent& e, const AffineCoeff& c) {
  if (e.size() != vars_.size()) throw DimensionMismatch("exponent length does not match the variable count");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void AffinePoly::prune(double rel_tol) {
  const double tol = rel_tol * max_abs_coefficient();
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second.prune(tol);
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
}

AffinePoly AffinePoly::embed(const std::vector<std::string>& new_vars) const {
  std::vector<int> map(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::find(new_vars.begin(), new_vars.end(), vars_[i]);
    if (it == new_vars.end()) {
      throw VariableMismatch("cannot embed: variable '" + vars_[i] + "' missing from target list");
    }
    map[i] = static_cast<int>(it - new_vars.begin());
  }
  AffinePoly out(new_vars);
  for (const auto& [e, c] : terms_) {
    Exponent ne(new_vars.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) ne[static_cast<std::size_t>(map[i])] = e[i];
    out.add_term(ne, c);
  }
  return out;
}

void AffinePoly::check_same_vars(const AffinePoly& other) const {
  if (vars_ != other.vars_) throw VariableMismatch("polynomials use different variable lists");
}

AffinePoly& AffinePoly::operator+=(const AffinePoly& other) {
  check_same_vars(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  prune();
  return *this;
}

AffinePoly& AffinePoly::operator-=(const AffinePoly& other) {
  check_same_vars(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  prune();
  return *this;
}

AffinePoly& AffinePoly::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

AffinePoly AffinePoly::operator-() const {
  AffinePoly r = *this;
  r *= -1.0;
  return r;
}

AffinePoly operator*(const AffinePoly& a, const AffinePoly& b) {
  a.check_same_vars(b);
  if (a.has_decision() && b.has_decision()) {
    throw AffinityError("product of two decision-dependent polynomials is not affine");
  }
  AffinePoly out(a.vars_);
  Exponent e(a.vars_.size());
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  out.prune();
  return out;
}

AffinePoly AffinePoly::pow(int exponent) const {
  if (exponent < 0) throw InvalidProblem("negative polynomial power");
  AffinePoly result = constant(vars_, 1.0);
  if (exponent == 0) return result;
  if (has_decision() && exponent > 1) {
    throw AffinityError("power of a decision-dependent polynomial is not affine");
  }
  AffinePoly base = *this;
  int n = exponent;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

bool AffinePoly::equals(const AffinePoly& other, double tol) const {
  if (vars_ != other.vars_) return false;
  auto diff = *this - other;
  return std::all_of(diff.terms_.begin(), diff.terms_.end(),
                     [tol](const auto& kv) { return kv.second.max_abs() <= tol; });
}

// ---------------------------------------------------------------------------

PolyMatrix::PolyMatrix(int rows, int cols, std::vector<std::string> variables)
    : rows_(rows), cols_(cols), vars_(std::move(variables)) {
  if (rows <= 0 || cols <= 0) throw DimensionMismatch("matrix dimensions must be positive");
  entries_.assign(static_cast<std::size_t>(rows * cols), AffinePoly(vars_));
}

PolyMatrix PolyMatrix::identity(int n, std::vector<std::string> variables) {
  PolyMatrix m(n, n, std::move(variables));
  for (int i = 0; i < n; ++i) m(i, i) = AffinePoly::constant(m.vars_, 1.0);
  return m;
}

PolyMatrix PolyMatrix::scalar(const AffinePoly& p) {
  PolyMatrix m(1, 1, p.variables());
  m(0, 0) = p;
  return m;
}

std::size_t PolyMatrix::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= rows_ || j >= cols_) throw DimensionMismatch("matrix index out of range");
  return static_cast<std::size_t>(i * cols_ + j);
}

void PolyMatrix::set(int i, int j, AffinePoly p) {
  if (p.variables() != vars_) throw VariableMismatch("entry variable list differs from matrix");
  entries_[index(i, j)] = std::move(p);
}

int PolyMatrix::degree() const {
  int d = -1;
  for (const auto& e : entries_) d = std::max(d, e.degree());
  return d;
}

int PolyMatrix::degree(std::span<const int> subset) const {
  int d = -1;
  for (const auto& e : entries_) d = std::max(d, e.degree(subset));
  return d;
}

bool PolyMatrix::has_decision() const {
  return std::any_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.has_decision(); });
}

bool PolyMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i) {
    for (int j = i + 1; j < cols_; ++j) {
      if (!(*this)(i, j).equals((*this)(j, i), tol)) return false;
    }
  }
  return true;
}

double PolyMatrix::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, e.max_abs_coefficient());
  return m;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(cols_, rows_, vars_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

PolyMatrix PolyMatrix::assign(std::span<const double> decision) const {
  PolyMatrix out(rows_, cols_, vars_);
  for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = entries_[k].assign(decision);
  return out;
}

PolyMatrix PolyMatrix::embed(const std::vector<std::string>& new_vars) const {
  PolyMatrix out(rows_, cols_, new_vars);
  for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = entries_[k].embed(new_vars);
  return out;
}

Eigen::MatrixXd PolyMatrix::evaluate(std::span<const double> point,
                                     std::span<const double> decision) const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).evaluate(point, decision);
  }
  return m;
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix sum shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix difference shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

PolyMatrix& PolyMatrix::operator*=(double s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
  if (a.vars_ != b.vars_) throw VariableMismatch("matrix product over different variable lists");
  PolyMatrix out(a.rows_, b.cols_, a.vars_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < b.cols_; ++j) {
      AffinePoly acc(a.vars_);
      for (int k = 0; k < a.cols_; ++k) {
        const auto& x = a(i, k);
        const auto& y = b(k, j);
        if (x.is_zero() || y.is_zero()) continue;
        acc += x * y;
      }
      out(i, j) = std::move(acc);
    }
  }
  return out;
}

PolyMatrix operator*(const AffinePoly& s, const PolyMatrix& m) {
  PolyMatrix out(m.rows_, m.cols_, m.vars_);
  for (std::size_t k = 0; k < m.entries_.size(); ++k) out.entries_[k] = s * m.entries_[k];
  return out;
}

PolyMatrix PolyMatrix::blocks(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& c,
                              const PolyMatrix& d) {
  if (a.rows_ != b.rows_ || c.rows_ != d.rows_ || a.cols_ != c.cols_ || b.cols_ != d.cols_) {
    throw DimensionMismatch("block shapes are inconsistent");
  }
  PolyMatrix out(a.rows_ + c.rows_, a.cols_ + b.cols_, a.vars_);
  auto place = [&out](const PolyMatrix& blk, int r0, int c0) {
    for (int i = 0; i < blk.rows_; ++i) {
      for (int j = 0; j < blk.cols_; ++j) out.set(r0 + i, c0 + j, blk(i, j));
    }
  };
  place(a, 0, 0);
  place(b, 0, a.cols_);
  place(c, a.rows_, 0);
  place(d, a.rows_, a.cols_);
  return out;
}

// ---------------------------------------------------------------------------

ComplexPolyPair::ComplexPolyPair(AffinePoly r, AffinePoly i) : re(std::move(r)), im(std::move(i)) {
  if (re.variables() != im.variables()) throw VariableMismatch("real and imaginary parts differ in variables");
}

ComplexPolyPair ComplexPolyPair::real(const AffinePoly& r) { return {r, AffinePoly(r.variables())}; }

std::complex<double> ComplexPolyPair::evaluate(std::span<const double> point,
                                               std::span<const double> decision) const {
  return {re.evaluate(point, decision), im.evaluate(point, decision)};
}

ComplexPolyPair& ComplexPolyPair::operator+=(const ComplexPolyPair& o) {
  re += o.re;
  im += o.im;
  return *this;
}

ComplexPolyPair& ComplexPolyPair::operator-=(const ComplexPolyPair& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

ComplexPolyPair operator*(const ComplexPolyPair& a, const ComplexPolyPair& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexPolyPair operator*(const ComplexPolyPair& a, const AffinePoly& b) { return {a.re * b, a.im * b}; }

}  // namespace ilcsos
