#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "savopt/common.hpp"
#include "savopt/sav.hpp"

namespace savopt {

struct ProblemConfig {
  std::string name;  // quadratic | rastrigin | rosenbrock | phase_retrieval | matrix_factorization
  Eigen::Index dimension = 0;  // 0 = problem default
  std::uint64_t seed = 1;
  nlohmann::json params = nlohmann::json::object();

  // Initial point: a named preset, a seeded random fill or an explicit vector.
  std::string init_preset;  // ones | zeros | paper-rosenbrock-2d | box-random | gaussian-random
  double init_scale = 1.0;
  std::optional<std::pair<double, double>> init_box;
  std::vector<double> init_vector;
};

struct OptimizerConfig {
  std::string name;
  double lr = 0.1;  // step size / initial step size, accepted as "dt" or "lr"
  double eta = 0.99;
  double rho = 1.1;
  double gamma = 0.85;
  double dt_min = 1e-6;
  double q = 0.5;
  bool restart = false;
  double shift_c = 1.0;
  double c_g = 1.0;  // legacy splitting bound
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::optional<WolfeParams> wolfe;
};

struct OperatorConfig {
  std::string kind = "zero";  // zero | scaled_identity | diagonal_hessian | laplacian | composite
  double lambda = 0.0;
  double sigma = 0.0;
};

struct BatchConfig {
  std::size_t size = 0;
  long epochs = 0;
};

struct OutputConfig {
  std::string trace_path;
  std::string format = "csv";  // csv | json
  std::string plot_path;
};

struct ExperimentConfig {
  ProblemConfig problem;
  OptimizerConfig optimizer;
  OperatorConfig op;
  long iterations = 0;
  double noise = 0.0;
  std::optional<BatchConfig> batch;
  // Runaway divergence threshold: the run is flagged "diverge" when the loss
  // exceeds diverge_ratio * (f(theta_0) + 1). 0 disables the rule; non-finite
  // values always terminate the run regardless.
  double diverge_ratio = 0.0;
  OutputConfig outputs;
};

struct CompareConfig {
  ExperimentConfig base;  // shared problem/operator/iterations/noise/batch
  std::vector<OptimizerConfig> optimizers;
  std::vector<double> step_sizes;
  std::string out_dir;
  std::string summary_path;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);
CompareConfig parse_compare_config(const nlohmann::json& j);
CompareConfig load_compare_config(const std::string& path);

}  // namespace savopt
