#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace ilcsos {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitNotMonotone = 4;

struct CliOverrides {
  std::optional<double> epsilon;
  std::optional<int> k_max;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

// Modes: synth-time, synth-freq, verify, simulate, repro-paper, solve-sdp.
// Writes result.json (and trace.csv / table.md where applicable) into the
// output directory and a short summary to `log`. Returns the exit status.
int run_mode(const std::string& mode, const std::string& config_path, const CliOverrides& overrides, std::ostream& log);

}  // namespace ilcsos
