#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ilcsos/freqdomain.hpp"
#include "ilcsos/timedomain.hpp"

namespace ilcsos {

enum class PlantKind { transfer_function, markov, theta_polytope, benchmark };

struct PlantSpec {
  PlantKind kind = PlantKind::transfer_function;
  UncertainTransferFunction tf;        // every kind except markov
  LiftedUncertainPlant lifted;         // markov only
  std::optional<ThetaTransferFunction> theta;
  bool time_domain() const { return kind == PlantKind::markov; }
};

struct FilterSpec {
  std::optional<int> lead;
  std::optional<int> lag;
  std::optional<std::vector<double>> values;
  std::optional<std::vector<bool>> free;
  std::vector<FirBound> bounds;
  bool causal = true;  // time domain only
};

struct VerifySettings {
  int lattice_steps = 50;
  int random_points = 1000;
  int n_omega = 720;
  std::uint64_t seed = 1;
};

struct SimulateSettings {
  int N = 100;
  int trials = 30;
  int runs = 1;
  std::vector<double> reference;  // empty means sin(2 pi k / N)
  double disturbance_amplitude = 0.1;
  std::uint64_t seed = 1;
};

struct RunConfig {
  std::string mode;  // empty when the file does not name one
  std::optional<PlantSpec> plant;
  std::optional<FilterSpec> q;
  std::optional<FilterSpec> l;
  PolyaOptions polya;
  int rounds = 1;
  VerifySettings verify;
  SimulateSettings simulate;
  std::string out_dir;
};

// Throws ConfigError on malformed input or unknown keys.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Filters resolved against the plant.
NoncausalFir resolve_fir(const std::optional<FilterSpec>& spec, bool is_q);
LiftedFilter resolve_lifted(const std::optional<FilterSpec>& spec, int N, bool is_q);

}  // namespace ilcsos
