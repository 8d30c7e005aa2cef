#include <iostream>

#include "CLI11.hpp"
#include "ilcsos/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Robust ILC synthesis by sum-of-squares programming"};
  std::string mode;
  std::string config;
  ilcsos::CliOverrides ov;
  double epsilon = 0.0;
  int k_max = 0;
  std::uint64_t seed = 0;
  std::string out;
  app.add_option("mode", mode, "synth-time | synth-freq | verify | simulate | repro-paper | solve-sdp")
      ->required()
      ->check(CLI::IsMember({"synth-time", "synth-freq", "verify", "simulate", "repro-paper", "solve-sdp"}));
  app.add_option("--config", config, "JSON run configuration (SDP text file for solve-sdp)");
  auto* eps_opt = app.add_option("--epsilon", epsilon, "positivity margin");
  auto* k_opt = app.add_option("--k-max", k_max, "largest Polya exponent");
  auto* seed_opt = app.add_option("--seed", seed, "seed for sampling grids and disturbances");
  auto* out_opt = app.add_option("--out", out, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ilcsos::kExitSchema;
  }
  if (*eps_opt) ov.epsilon = epsilon;
  if (*k_opt) ov.k_max = k_max;
  if (*seed_opt) ov.seed = seed;
  if (*out_opt) ov.out_dir = out;
  return ilcsos::run_mode(mode, config, ov, std::cerr);
}
