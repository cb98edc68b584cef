#include "savopt/config.hpp"

#include <fstream>
#include <set>

namespace savopt {

namespace {

const std::set<std::string>& known_problems() {
  static const std::set<std::string> names{"quadratic", "rastrigin", "rosenbrock",
                                           "phase_retrieval", "matrix_factorization"};
  return names;
}

const std::set<std::string>& known_optimizers() {
  static const std::set<std::string> names{"gd",   "nag",  "adam",         "sd",
                                           "sav",  "savgd", "msav",        "legacy_sav",
                                           "rsav", "adaptive_rsav", "rsavq", "linesearch_sav"};
  return names;
}

const std::set<std::string>& known_operators() {
  static const std::set<std::string> names{"zero", "scaled_identity", "diagonal_hessian",
                                           "laplacian", "composite"};
  return names;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid JSON: " + e.what());
  }
  return j;
}

ProblemConfig parse_problem(const nlohmann::json& j) {
  ProblemConfig p;
  p.name = j.at("name").get<std::string>();
  if (!known_problems().count(p.name)) {
    throw std::runtime_error("unknown problem '" + p.name + "'");
  }
  p.dimension = j.value("dimension", static_cast<Eigen::Index>(0));
  p.seed = j.value("seed", static_cast<std::uint64_t>(1));
  if (j.contains("params")) p.params = j.at("params");

  if (j.contains("init")) {
    const auto& init = j.at("init");
    if (init.is_string()) {
      p.init_preset = init.get<std::string>();
    } else if (init.is_array()) {
      p.init_vector = init.get<std::vector<double>>();
    } else if (init.is_object()) {
      if (init.contains("gaussian")) {
        p.init_preset = "gaussian-random";
        p.init_scale = init.at("gaussian").value("scale", 1.0);
      } else if (init.contains("box_random")) {
        p.init_preset = "box-random";
        const auto& box = init.at("box_random");
        if (box.contains("low") || box.contains("high")) {
          p.init_box = std::make_pair(box.value("low", -1.0), box.value("high", 1.0));
        }
      } else {
        throw std::runtime_error("init object must contain 'gaussian' or 'box_random'");
      }
    } else {
      throw std::runtime_error("init must be a preset name, an object or a vector");
    }
    static const std::set<std::string> presets{"",          "ones",       "zeros",
                                               "paper-rosenbrock-2d", "box-random",
                                               "gaussian-random"};
    if (!presets.count(p.init_preset)) {
      throw std::runtime_error("unknown init preset '" + p.init_preset + "'");
    }
  }
  return p;
}

OptimizerConfig parse_optimizer(const nlohmann::json& j) {
  OptimizerConfig o;
  o.name = j.at("name").get<std::string>();
  if (!known_optimizers().count(o.name)) {
    throw std::runtime_error("unknown optimizer '" + o.name + "'");
  }
  if (j.contains("dt") && j.contains("lr")) {
    throw std::runtime_error("optimizer: give either 'dt' or 'lr', not both");
  }
  o.lr = j.value("dt", j.value("lr", 0.1));
  o.eta = j.value("eta", o.eta);
  o.rho = j.value("rho", o.rho);
  o.gamma = j.value("gamma", o.gamma);
  o.dt_min = j.value("dt_min", o.dt_min);
  o.q = j.value("q", o.q);
  o.restart = j.value("restart", o.restart);
  o.shift_c = j.value("C", o.shift_c);
  o.c_g = j.value("C_g", o.c_g);
  o.momentum = j.value("momentum", o.momentum);
  o.beta1 = j.value("beta1", o.beta1);
  o.beta2 = j.value("beta2", o.beta2);
  o.adam_eps = j.value("eps", o.adam_eps);
  if (j.contains("wolfe")) {
    WolfeParams w;
    w.c1 = j.at("wolfe").value("c1", w.c1);
    w.c2 = j.at("wolfe").value("c2", w.c2);
    o.wolfe = w;
  }
  if (!(o.lr > 0)) throw std::runtime_error("optimizer: step size must be positive");
  if (!(o.eta >= 0 && o.eta <= 1)) throw std::runtime_error("optimizer: eta must be in [0,1]");
  if (!(o.rho > 1)) throw std::runtime_error("optimizer: rho must be > 1");
  if (!(o.gamma > 0 && o.gamma < 1)) throw std::runtime_error("optimizer: gamma must be in (0,1)");
  if (!(o.q > 0)) throw std::runtime_error("optimizer: q must be positive");
  if (o.name == "adaptive_rsav" && o.lr < o.dt_min) {
    throw std::runtime_error("optimizer: initial step size must be >= dt_min");
  }
  return o;
}

OperatorConfig parse_operator(const nlohmann::json& j) {
  OperatorConfig op;
  op.kind = j.value("kind", op.kind);
  if (!known_operators().count(op.kind)) {
    throw std::runtime_error("unknown operator kind '" + op.kind + "'");
  }
  op.lambda = j.value("lambda", op.lambda);
  op.sigma = j.value("sigma", op.sigma);
  if (op.lambda < 0 || op.sigma < 0) throw std::runtime_error("operator: lambda, sigma must be >= 0");
  return op;
}

}  // namespace

namespace {

// Seeds are mandatory wherever randomness enters: stochastic problems,
// gradient noise, or a seeded random initial point (Rastrigin defaults to
// box-random when no init is given).
void require_seed_if_stochastic(const nlohmann::json& j, const ProblemConfig& p, double noise) {
  if (j.at("problem").contains("seed")) return;
  const bool random_init = p.init_preset == "box-random" || p.init_preset == "gaussian-random" ||
                           (p.init_preset.empty() && p.init_vector.empty() &&
                            (p.name == "rastrigin" || p.name == "phase_retrieval" ||
                             p.name == "matrix_factorization"));
  const bool stochastic_problem =
      p.name == "phase_retrieval" || p.name == "matrix_factorization";
  if (noise > 0 || random_init || stochastic_problem) {
    throw std::runtime_error("problem.seed is required for stochastic components");
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.problem = parse_problem(j.at("problem"));
  cfg.optimizer = parse_optimizer(j.at("optimizer"));
  if (j.contains("operator")) cfg.op = parse_operator(j.at("operator"));
  cfg.iterations = j.value("iterations", 0L);
  if (cfg.iterations < 0) throw std::runtime_error("iterations must be >= 0");
  cfg.noise = j.value("noise", 0.0);
  if (cfg.noise < 0) throw std::runtime_error("noise must be >= 0");
  if (j.contains("batch")) {
    BatchConfig b;
    b.size = j.at("batch").at("size").get<std::size_t>();
    b.epochs = j.at("batch").value("epochs", 0L);
    if (b.size == 0) throw std::runtime_error("batch.size must be positive");
    cfg.batch = b;
  }
  cfg.diverge_ratio = j.value("diverge_ratio", 0.0);
  if (cfg.diverge_ratio < 0) throw std::runtime_error("diverge_ratio must be >= 0");
  if (j.contains("outputs")) {
    const auto& out = j.at("outputs");
    cfg.outputs.trace_path = out.value("trace", "");
    cfg.outputs.format = out.value("format", "csv");
    cfg.outputs.plot_path = out.value("plot", "");
    if (cfg.outputs.format != "csv" && cfg.outputs.format != "json") {
      throw std::runtime_error("outputs.format must be 'csv' or 'json'");
    }
  }
  if (cfg.optimizer.shift_c <= 0 && cfg.problem.name != "phase_retrieval") {
    throw std::runtime_error("C = 0 is only admissible for phase_retrieval");
  }
  require_seed_if_stochastic(j, cfg.problem, cfg.noise);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(load_json(path));
}

CompareConfig parse_compare_config(const nlohmann::json& j) {
  CompareConfig cmp;
  nlohmann::json base = j;
  base.erase("optimizers");
  base.erase("step_sizes");
  base.erase("outputs");
  // The base config is parsed with a placeholder optimizer; each cell replaces it.
  if (!j.contains("optimizers") || !j.at("optimizers").is_array() || j.at("optimizers").empty()) {
    throw std::runtime_error("compare config needs a non-empty 'optimizers' array");
  }
  base["optimizer"] = j.at("optimizers").at(0);
  cmp.base = parse_experiment_config(base);
  for (const auto& opt : j.at("optimizers")) {
    cmp.optimizers.push_back(parse_optimizer(opt));
  }
  if (j.contains("step_sizes")) {
    cmp.step_sizes = j.at("step_sizes").get<std::vector<double>>();
    for (double s : cmp.step_sizes) {
      if (!(s > 0)) throw std::runtime_error("step_sizes must be positive");
    }
  }
  if (j.contains("outputs")) {
    cmp.out_dir = j.at("outputs").value("dir", "");
    cmp.summary_path = j.at("outputs").value("summary", "");
  }
  return cmp;
}

CompareConfig load_compare_config(const std::string& path) {
  return parse_compare_config(load_json(path));
}

}  // namespace savopt
