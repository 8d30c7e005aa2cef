#pragma once

#include <stdexcept>
#include <string>

namespace ilcsos {

// Base for every error raised by the library. Report-only operations
// (jury_stability, check_certificate) never throw these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Multiplication of two decision-carrying polynomials.
class AffinityError : public Error {
 public:
  using Error::Error;
};

// Operands built over different variable lists, or an unknown variable name.
class VariableMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotToeplitz : public Error {
 public:
  using Error::Error;
};

class NotTriangular : public Error {
 public:
  using Error::Error;
};

// The plant denominator vanishes somewhere on the unit circle.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

// A monomial of the SOS target cannot be written as a product of two basis
// monomials.
class BasisDeficiency : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

class SingularPlant : public Error {
 public:
  using Error::Error;
};

class UnitCirclePole : public Error {
 public:
  using Error::Error;
};

class Divergent : public Error {
 public:
  using Error::Error;
};

class EmptyPolytope : public Error {
 public:
  using Error::Error;
};

// Invalid problem description (length mismatches, N too large, bad epsilon).
class InvalidProblem : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ilcsos
