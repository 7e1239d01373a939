#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "aderdg/limiter.hpp"
#include "aderdg/mesh.hpp"
#include "aderdg/predictor.hpp"
#include "aderdg/problems.hpp"
#include "aderdg/solver.hpp"

namespace aderdg {

struct RunConfig {
  std::string system = "advection";
  int order = 3;
  int dim = 1;
  std::array<int, 3> cells{10, 10, 10};
  std::array<double, 3> domain_min{0.0, 0.0, 0.0};
  std::array<double, 3> domain_max{1.0, 1.0, 1.0};
  double cfl = 0.1;
  double final_time = 1.0;
  long max_steps = -1;
  std::array<std::array<BoundaryType, 2>, 3> bc{};

  ProblemParams ic;
  double gamma = 1.4;
  std::array<double, 3> advection_velocity{1.0, 0.0, 0.0};
  double alpha_min = 1e-3;

  bool limiter = true;
  double dmp_delta0 = 1e-4;
  double dmp_epsilon = 1e-3;
  PredictorMode predictor = PredictorMode::kConservative;
  InitialGuess initial_guess = InitialGuess::kAuto;
  double picard_tol = 1e-12;
  int picard_max_iter = -1;
  int batch_width = 8;
  EvalMode kernel = EvalMode::kBatched;
  Execution execution = Execution::kParallel;

  long output_every = 0;
  std::string output_format = "csv";
  std::string output_dir = ".";
  std::string output_prefix = "fields";
  std::string diagnostics_file;
  int error_quantity = 0;

  bool operator==(const RunConfig&) const = default;
};

/// All violations found while parsing, each prefixed with its line number
/// where one applies.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Parses `key = value` lines (`#` starts a comment). Unknown keys and
/// constraint violations raise ConfigError; a repeated key keeps the last
/// value and adds a warning.
RunConfig parse_config(const std::string& text, std::vector<std::string>* warnings = nullptr);
RunConfig load_config(const std::string& path, std::vector<std::string>* warnings = nullptr);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Checks cross-field constraints; returns the list of violations.
std::vector<std::string> validate(const RunConfig& config);

// Objects built from a configuration.
std::shared_ptr<const PdeSystem> make_system(const RunConfig& config);
CartesianMesh make_mesh(const RunConfig& config);
SolverOptions make_solver_options(const RunConfig& config);

}  // namespace aderdg
