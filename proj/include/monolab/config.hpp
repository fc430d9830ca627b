#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "monolab/forward.hpp"

namespace monolab {

/// Single-file JSON configuration for the CLI. Unknown keys are rejected
/// anywhere in the document to catch typos early.
struct Config {
  Rectangle domain;
  int nx = 64;
  int ny = 64;

  struct Source {
    std::string kind = "constant";  // constant | manufactured | riccati
    double value = 1.0;             // the constant source
  } source;

  std::vector<Inclusion> inclusions;
  SolverControls solver;

  struct Experiments {
    std::vector<double> lambdas{1.0, 2.0};
    std::string mode = "two_lambda";  // two_lambda | known_epsilon
    double noise_level = 0.0;
    std::uint64_t noise_seed = 0;
    std::vector<double> epsilons;  // for the rates command
  } experiments;

  std::string output_dir = "out";
};

/// Throws Error(InvalidInput) naming the offending field.
Config parse_config(const nlohmann::json& j);
Config load_config(const std::string& path);

/// Fully resolved configuration (defaults filled in) for report provenance.
nlohmann::json resolved_config_json(const Config& config);

std::string shape_name(Shape shape);
Shape shape_from_name(const std::string& name);

}  // namespace monolab
