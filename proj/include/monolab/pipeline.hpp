#pragma once

#include <string>

#include "monolab/config.hpp"
#include "monolab/io.hpp"

namespace monolab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitSolverFailure = 3;
inline constexpr int kExitReconstructionFailure = 4;

/// Nodal source field for the configured source kind.
ScalarField make_source_field(const Grid& grid, const Config::Source& source);

int cmd_forward(const Config& config, const std::string& out_dir);
int cmd_rates(const Config& config, const std::string& out_dir);
int cmd_polarization(const Config& config, const std::string& out_dir);
int cmd_reconstruct(const Config& config, const std::string& out_dir);

/// Full CLI: <tool> forward|rates|polarization|reconstruct --config <path> [--out <dir>].
int run_cli(int argc, char** argv);

}  // namespace monolab
