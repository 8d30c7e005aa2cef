#include "ilcsos/affine.hpp"

#include <algorithm>
#include <cmath>

#include "ilcsos/errors.hpp"

namespace ilcsos {

int DecisionSpace::add(std::string name) {
  if (find(name) >= 0) {
    throw InvalidProblem("duplicate decision variable '" + name + "'");
  }
  names_.push_back(std::move(name));
  return size() - 1;
}

int DecisionSpace::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

AffineCoeff AffineCoeff::variable(int id, double scale) {
  AffineCoeff c;
  if (scale != 0.0) c.terms_[id] = scale;
  return c;
}

double AffineCoeff::coefficient(int id) const {
  auto it = terms_.find(id);
  return it == terms_.end() ? 0.0 : it->second;
}

double AffineCoeff::evaluate(std::span<const double> values) const {
  double v = constant_;
  for (const auto& [id, c] : terms_) {
    if (id < 0 || static_cast<std::size_t>(id) >= values.size()) {
      throw InvalidProblem("decision value missing for variable id " + std::to_string(id));
    }
    v += c * values[id];
  }
  return v;
}

double AffineCoeff::max_abs() const {
  double m = std::abs(constant_);
  for (const auto& [id, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void AffineCoeff::prune(double tol) {
  if (std::abs(constant_) <= tol) constant_ = 0.0;
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

AffineCoeff& AffineCoeff::operator+=(const AffineCoeff& other) {
  constant_ += other.constant_;
  for (const auto& [id, c] : other.terms_) terms_[id] += c;
  return *this;
}

AffineCoeff& AffineCoeff::operator-=(const AffineCoeff& other) {
  constant_ -= other.constant_;
  for (const auto& [id, c] : other.terms_) terms_[id] -= c;
  return *this;
}

AffineCoeff& AffineCoeff::operator*=(double s) {
  constant_ *= s;
  for (auto& [id, c] : terms_) c *= s;
  return *this;
}

AffineCoeff AffineCoeff::operator-() const {
  AffineCoeff r = *this;
  r *= -1.0;
  return r;
}

AffineCoeff operator*(const AffineCoeff& a, const AffineCoeff& b) {
  if (a.is_constant()) return b * a.constant();
  if (b.is_constant()) return a * b.constant();
  throw AffinityError("product of two decision-dependent coefficients is not affine");
}

AffineCoeff AffineCoeff::substitute(const std::map<int, double>& values) const {
  AffineCoeff r(constant_);
  for (const auto& [id, c] : terms_) {
    auto it = values.find(id);
    if (it != values.end()) {
      r.constant_ += c * it->second;
    } else {
      r.terms_[id] += c;
    }
  }
  return r;
}

}  // namespace ilcsos
