#include "ilcsos/simplex.hpp"

#include <cmath>
#include <random>

#include "ilcsos/errors.hpp"

namespace ilcsos {

std::vector<SimplexPoint> simplex_vertices(int n) {
  if (n < 1) throw InvalidProblem("simplex dimension must be positive");
  std::vector<SimplexPoint> out;
  for (int i = 0; i < n; ++i) {
    SimplexPoint p(static_cast<std::size_t>(n), 0.0);
    p[static_cast<std::size_t>(i)] = 1.0;
    out.push_back(p);
  }
  return out;
}

namespace {

void lattice_rec(int n, int steps, int pos, int remaining, std::vector<int>& k, std::vector<SimplexPoint>& out) {
  if (pos == n - 1) {
    k[static_cast<std::size_t>(pos)] = remaining;
    SimplexPoint p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = static_cast<double>(k[static_cast<std::size_t>(i)]) / steps;
    out.push_back(p);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    k[static_cast<std::size_t>(pos)] = v;
    lattice_rec(n, steps, pos + 1, remaining - v, k, out);
  }
}

}  // namespace

std::vector<SimplexPoint> simplex_lattice(int n, int steps) {
  if (n < 1 || steps < 1) throw InvalidProblem("simplex lattice needs n >= 1 and steps >= 1");
  std::vector<SimplexPoint> out;
  std::vector<int> k(static_cast<std::size_t>(n), 0);
  lattice_rec(n, steps, 0, steps, k, out);
  return out;
}

std::vector<SimplexPoint> simplex_edge_grid(int n, int steps) {
  std::vector<SimplexPoint> out;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int s = 1; s < steps; ++s) {
        SimplexPoint p(static_cast<std::size_t>(n), 0.0);
        p[static_cast<std::size_t>(a)] = static_cast<double>(s) / steps;
        p[static_cast<std::size_t>(b)] = 1.0 - p[static_cast<std::size_t>(a)];
        out.push_back(p);
      }
    }
  }
  return out;
}

std::vector<SimplexPoint> simplex_random(int n, int count, std::uint64_t seed) {
  if (n < 1) throw InvalidProblem("simplex dimension must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<SimplexPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    SimplexPoint p(static_cast<std::size_t>(n));
    double s = 0.0;
    for (auto& v : p) {
      v = -std::log(1.0 - unif(rng));
      s += v;
    }
    for (auto& v : p) v /= s;
    out.push_back(p);
  }
  return out;
}

}  // namespace ilcsos
