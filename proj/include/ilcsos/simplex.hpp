#pragma once

#include <cstdint>
#include <vector>

namespace ilcsos {

using SimplexPoint = std::vector<double>;

std::vector<SimplexPoint> simplex_vertices(int n);
// All points with coordinates k_i / steps, sum k_i = steps.
std::vector<SimplexPoint> simplex_lattice(int n, int steps);
// Points on every edge (pairs of vertices) at spacing 1/steps, vertices excluded.
std::vector<SimplexPoint> simplex_edge_grid(int n, int steps);
// Uniform (flat Dirichlet) samples, deterministic for a given seed.
std::vector<SimplexPoint> simplex_random(int n, int count, std::uint64_t seed);

}  // namespace ilcsos
