#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ilcsos/freqdomain.hpp"
#include "ilcsos/simplex.hpp"
#include "ilcsos/timedomain.hpp"

namespace ilcsos {

struct SampleGrid {
  std::vector<SimplexPoint> lambda_points;
  std::vector<double> freq_points;  // omega in [0, 2 pi)
  std::uint64_t seed = 0;

  // Vertices, a uniform lattice (50 steps for n <= 3, edges only above that)
  // and `random_points` seeded samples; `n_omega` uniform frequencies.
  static SampleGrid make(int n_lambda, std::uint64_t seed = 1, int lattice_steps = 50, int random_points = 1000,
                         int n_omega = 720);
  // Vertices plus random samples only.
  static SampleGrid vertices_and_random(int n_lambda, int random_points, int n_omega, std::uint64_t seed);
  // Cartesian lambda lattice (n_lambda = 2: `steps` + 1 points on the edge).
  static SampleGrid lattice(int n_lambda, int steps, int n_omega);
  void validate() const;
};

struct TimeGammaSample {
  double gamma = 0.0;
  SimplexPoint lambda;
};

struct FreqGammaSample {
  double gamma = 0.0;
  SimplexPoint lambda;
  double omega = 0.0;
};

// sigma_max(P Q (I - L P) P^-1) maximized over the lambda grid.
TimeGammaSample sampled_gamma_time(const LiftedUncertainPlant& plant, const Eigen::MatrixXd& Q, const Eigen::MatrixXd& L,
                                   const SampleGrid& grid);

// |Q (1 - z L P)| maximized over the lambda and omega grids.
FreqGammaSample sampled_gamma_freq(const UncertainTransferFunction& plant, const NoncausalFir& Q, const NoncausalFir& L,
                                   const SampleGrid& grid);

}  // namespace ilcsos
