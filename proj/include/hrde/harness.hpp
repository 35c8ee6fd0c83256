#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hrde/analysis.hpp"
#include "hrde/lyapunov.hpp"
#include "hrde/objective.hpp"
#include "hrde/optimizers.hpp"

namespace hrde {

/// Environment variable naming the root directory for relative output paths.
inline constexpr const char* kOutputRootEnv = "HRDE_OUTPUT_ROOT";

/// Parse or validation failure; the message starts with the field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ObjectiveSpec {
  std::string id;  // "quad", "quad-rot" or "reg-logistic"
  std::vector<double> spectrum;
  std::optional<std::uint64_t> rotation_seed;
  std::uint64_t data_seed = 0;
  int n_samples = 0;
  int dim = 0;
  double reg = 0.0;

  bool operator==(const ObjectiveSpec&) const = default;
};

struct SeededBall {
  double radius = 1.0;
  std::uint64_t seed = 0;
  bool operator==(const SeededBall&) const = default;
};

/// Explicit start or a seeded uniform draw from a ball around the origin.
using StartSpec = std::variant<std::vector<double>, SeededBall>;

/// Step size: a number or one of "1/L", "1/(2L)", "1/(4mu)".
using StepSpec = std::variant<double, std::string>;

struct ExperimentConfig {
  std::string name = "run";
  ObjectiveSpec objective;
  Method method = Method::gd;
  std::optional<double> beta;
  StartSpec x0 = SeededBall{};
  StepSpec s = 0.0;
  std::size_t K = 0;
  std::optional<LyapunovForm> lyapunov;
  std::optional<BoundTheorem> bound;
  FirstVelocity first_velocity = FirstVelocity::scheme;
  std::uint64_t seed = 0;
  std::string output_path;

  /// Filled by parse_config from the objective's (mu, L).
  double s_resolved = 0.0;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses a JSON config document, validates it, and resolves symbolic step
/// sizes against the objective. Errors are ConfigError("config.<field>: ...").
ExperimentConfig parse_config(const std::string& text);

/// JSON echo of the config, with every default made explicit. Parsing the
/// echo yields an equal config.
std::string dump_config(const ExperimentConfig& config);

Objective make_objective(const ObjectiveSpec& spec);
Vector resolve_start(const ExperimentConfig& config, int dim);
double resolve_step(const StepSpec& spec, double mu, double L);

struct SummaryLine {
  std::string key;
  std::string value;
};

struct ExecutionResult {
  std::filesystem::path directory;
  std::filesystem::path trajectory_csv;
  std::filesystem::path summary;
  std::filesystem::path config_echo;
  std::vector<SummaryLine> lines;
  /// No guaranteed certificate failed and the run did not abort.
  bool passed = true;
};

/// Runs the experiment and writes trajectory.csv, summary.txt (key: value
/// lines) and config.json into the output directory. Relative output paths
/// resolve against `output_root`, else $HRDE_OUTPUT_ROOT, else the working
/// directory. I/O failures throw std::runtime_error naming the path.
ExecutionResult execute(const ExperimentConfig& config,
                        std::optional<std::filesystem::path> output_root = std::nullopt);

std::filesystem::path default_output_root();

}  // namespace hrde
