#include "savopt/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "savopt/baselines.hpp"
#include "savopt/matrix_factorization.hpp"
#include "savopt/phase_retrieval.hpp"
#include "savopt/plot.hpp"
#include "savopt/problems.hpp"
#include "savopt/rng.hpp"
#include "savopt/sav.hpp"

namespace savopt {

namespace {

constexpr std::uint64_t kInitTag = 0x696e6974ULL;
constexpr std::uint64_t kNoiseTag = 0x6e6f6973ULL;
constexpr std::uint64_t kBatchTag = 0x62617463ULL;

Vec make_init(const ProblemConfig& pc, const Objective& obj, const std::string& problem_name) {
  const Eigen::Index dim = obj.dimension();
  if (!pc.init_vector.empty()) {
    if (static_cast<Eigen::Index>(pc.init_vector.size()) != dim) {
      throw std::runtime_error("init vector has size " + std::to_string(pc.init_vector.size()) +
                               ", problem dimension is " + std::to_string(dim));
    }
    return Eigen::Map<const Vec>(pc.init_vector.data(), dim);
  }

  std::string preset = pc.init_preset;
  if (preset.empty()) {
    if (problem_name == "quadratic") preset = "ones";
    else if (problem_name == "rastrigin") preset = "box-random";
    else if (problem_name == "rosenbrock") preset = dim == 2 ? "paper-rosenbrock-2d" : "zeros";
    else preset = "gaussian-random";
  }

  if (preset == "ones") return Vec::Ones(dim);
  if (preset == "zeros") return Vec::Zero(dim);
  if (preset == "paper-rosenbrock-2d") {
    if (dim != 2) throw std::runtime_error("paper-rosenbrock-2d init needs dimension 2");
    Vec v(2);
    v << -3.0, -4.0;
    return v;
  }
  Rng rng(mix_seed(pc.seed, kInitTag));
  if (preset == "box-random") {
    double lo = -1.0, hi = 1.0;
    if (problem_name == "rastrigin") {
      lo = RastriginProblem::box_low;
      hi = RastriginProblem::box_high;
    }
    if (pc.init_box) {
      lo = pc.init_box->first;
      hi = pc.init_box->second;
    }
    Vec v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.uniform(lo, hi);
    return v;
  }
  // gaussian-random
  if (problem_name == "phase_retrieval") {
    // Standard complex Gaussian signal, presented as interleaved (re, im).
    CVec z = PhaseRetrievalProblem::complex_gaussian(static_cast<int>(dim / 2), rng);
    return pc.init_scale * PhaseRetrievalProblem::to_real(z);
  }
  return pc.init_scale * rng.normal_vector(dim);
}

std::unique_ptr<Objective> make_base_problem(const ProblemConfig& pc) {
  const auto& params = pc.params;
  if (pc.name == "quadratic") {
    const Eigen::Index n = pc.dimension > 0 ? pc.dimension : 100;
    return std::make_unique<QuadraticProblem>(n);
  }
  if (pc.name == "rastrigin") {
    const Eigen::Index n = pc.dimension > 0 ? pc.dimension : 2;
    return std::make_unique<RastriginProblem>(n);
  }
  if (pc.name == "rosenbrock") {
    const Eigen::Index n = pc.dimension > 0 ? pc.dimension : 2;
    const double a = params.value("a", 1.0);
    const double b = params.value("b", 100.0);
    return std::make_unique<RosenbrockProblem>(n, a, b);
  }
  if (pc.name == "phase_retrieval") {
    const int masks = params.value("masks", 6);
    if (params.contains("image")) {
      const auto shape = params.at("image").get<std::vector<int>>();
      if (shape.size() != 2) throw std::runtime_error("phase_retrieval image needs [rows, cols]");
      return std::make_unique<PhaseRetrievalProblem>(
          PhaseRetrievalProblem::image(shape[0], shape[1], masks, pc.seed));
    }
    const int n = params.value("signal", pc.dimension > 0 ? static_cast<int>(pc.dimension / 2) : 64);
    return std::make_unique<PhaseRetrievalProblem>(PhaseRetrievalProblem::signal(n, masks, pc.seed));
  }
  // matrix_factorization
  const int d = params.value("embedding_dim", 8);
  const double lambda_u = params.value("lambda_u", 1e-4);
  const double lambda_i = params.value("lambda_i", 1e-4);
  if (params.contains("ratings_file")) {
    return std::make_unique<MatrixFactorizationProblem>(MatrixFactorizationProblem::load_ratings(
        params.at("ratings_file").get<std::string>(), d, lambda_u, lambda_i, pc.seed));
  }
  const int users = params.value("users", 200);
  const int items = params.value("items", 300);
  const int rank = params.value("rank", d);
  const std::size_t count = params.value("ratings", static_cast<std::size_t>(800));
  const double noise = params.value("noise", 0.0);
  const double mean = params.value("mean", 3.0);
  const double spread = params.value("spread", 1.0);
  return std::make_unique<MatrixFactorizationProblem>(MatrixFactorizationProblem::synth_ratings(
      users, items, rank, count, noise, pc.seed, d, lambda_u, lambda_i, mean, spread));
}

bool is_sav_family(const std::string& name) {
  return name == "sav" || name == "savgd" || name == "msav" || name == "rsav" ||
         name == "adaptive_rsav" || name == "rsavq" || name == "linesearch_sav" ||
         name == "legacy_sav";
}

}  // namespace

ProblemInstance build_problem(const ExperimentConfig& cfg) {
  ProblemInstance inst;
  inst.base = make_base_problem(cfg.problem);
  inst.base->set_shift_c(cfg.optimizer.shift_c);
  inst.active = inst.base.get();

  if (cfg.batch) {
    auto* data = dynamic_cast<BatchEvaluable*>(inst.base.get());
    if (!data) throw std::runtime_error("problem '" + cfg.problem.name + "' is not batchable");
    inst.batched = std::make_unique<MiniBatchObjective>(*inst.base, *data, cfg.batch->size,
                                                        mix_seed(cfg.problem.seed, kBatchTag));
    inst.active = inst.batched.get();
  }
  if (cfg.noise > 0.0) {
    inst.noisy = std::make_unique<NoisyGradient>(*inst.active, cfg.noise,
                                                 mix_seed(cfg.problem.seed, kNoiseTag));
    inst.active = inst.noisy.get();
  }
  inst.init = make_init(cfg.problem, *inst.base, cfg.problem.name);
  return inst;
}

LinearOperator build_operator(const OperatorConfig& op_cfg, const Objective& problem) {
  const Eigen::Index dim = problem.dimension();
  if (op_cfg.kind == "zero") return LinearOperator::zero(dim);
  if (op_cfg.kind == "scaled_identity") return LinearOperator::scaled_identity(op_cfg.lambda, dim);
  if (op_cfg.kind == "diagonal_hessian") {
    const Vec* diag = problem.hessian_diagonal();
    if (!diag) throw std::runtime_error("problem does not expose a Hessian diagonal");
    return LinearOperator::diagonal(*diag);
  }
  if (op_cfg.kind == "laplacian") return LinearOperator::periodic_laplacian(op_cfg.sigma, dim);
  return LinearOperator::composite(op_cfg.lambda, op_cfg.sigma, dim);
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  ProblemInstance inst = build_problem(cfg);
  Objective& obj = *inst.active;
  const LinearOperator op = build_operator(cfg.op, *inst.base);
  const OptimizerConfig& oc = cfg.optimizer;

  long iterations = cfg.iterations;
  if (cfg.batch && cfg.batch->epochs > 0) {
    iterations = cfg.batch->epochs * static_cast<long>(inst.batched->batches_per_epoch());
  }

  const double f0 = obj.value(inst.init);
  const double runaway_limit =
      cfg.diverge_ratio > 0 ? cfg.diverge_ratio * (f0 + 1.0) : std::numeric_limits<double>::infinity();
  bool warned_big_dt = false;

  Trace trace;
  trace.reserve(static_cast<std::size_t>(iterations) + 1);
  Status status = Status::ok;

  const std::string& name = oc.name;
  const bool sav_like = is_sav_family(name);
  const bool restart_each_batch = cfg.batch.has_value() && sav_like;

  // Optimizer state.
  SavState sav_state;
  NagState nag_state;
  AdamState adam_state;
  Vec plain_theta;
  if (name == "nag") {
    nag_state = init_nag_state(inst.init, oc.lr, oc.momentum);
  } else if (name == "adam") {
    adam_state = init_adam_state(inst.init, oc.lr, oc.beta1, oc.beta2, oc.adam_eps);
  } else if (name == "gd" || name == "sd") {
    plain_theta = inst.init;
  } else if (name == "legacy_sav") {
    const double g0 = obj.value(inst.init) - 0.5 * inst.init.dot(op.apply(inst.init));
    if (!(g0 + oc.c_g > 0)) throw DomainError("legacy_sav: g(theta_0) + C_g must be positive");
    sav_state.theta = inst.init;
    sav_state.r = std::sqrt(g0 + oc.c_g);
    sav_state.dt = oc.lr;
  } else if (name == "rsavq" || name == "linesearch_sav") {
    sav_state = init_savq_state(obj, inst.init, oc.lr, oc.q);
  } else if (sav_like) {
    sav_state = init_sav_state(obj, inst.init, oc.lr);
  }

  RelaxParams relax{oc.eta};
  AdaptiveParams adapt{oc.lr, oc.dt_min, oc.rho, oc.gamma};
  QParams qp{oc.q, oc.restart};

  auto current_theta = [&]() -> const Vec& {
    if (name == "nag") return nag_state.theta;
    if (name == "adam") return adam_state.theta;
    if (name == "gd" || name == "sd") return plain_theta;
    return sav_state.theta;
  };

  for (long k = 0; k < iterations; ++k) {
    if (cfg.batch && k > 0) inst.batched->advance();
    if (restart_each_batch && name != "legacy_sav") {
      // Mini-batch restart: re-anchor r to the incoming batch's energy.
      const double fb = obj.value(sav_state.theta);
      if (!std::isfinite(fb)) {
        TraceRecord rec;
        rec.k = k;
        rec.f = fb;
        rec.status = Status::diverge;
        trace.push_back(rec);
        status = Status::diverge;
        break;
      }
      const double fc = shifted_value(obj, fb);
      sav_state.r = (name == "rsavq" || name == "linesearch_sav")
                        ? (oc.q == 0.5 ? std::sqrt(fc) : std::pow(fc, oc.q))
                        : std::sqrt(fc);
    }

    TraceRecord rec;
    try {
      if (name == "gd") {
        BaselineStep step = gd_step(plain_theta, k, obj, op, oc.lr);
        rec = step.trace;
        if (rec.status == Status::ok) plain_theta = std::move(step.theta);
      } else if (name == "sd") {
        BaselineStep step = steepest_descent_step(plain_theta, k, obj);
        rec = step.trace;
        if (rec.status == Status::ok) plain_theta = std::move(step.theta);
      } else if (name == "nag") {
        NagStep step = nag_step(nag_state, obj);
        rec = step.trace;
        if (rec.status == Status::ok) nag_state = std::move(step.state);
      } else if (name == "adam") {
        AdamStep step = adam_step(adam_state, obj);
        rec = step.trace;
        if (rec.status == Status::ok) adam_state = std::move(step.state);
      } else {
        StepResult step;
        if (name == "sav") {
          step = modified_sav_step(sav_state, obj, op, oc.lr);
        } else if (name == "savgd") {
          step = savgd_step(sav_state, obj, oc.lr);
        } else if (name == "msav") {
          step = msav_step(sav_state, obj, op, oc.lr);
        } else if (name == "legacy_sav") {
          step = legacy_sav_step(sav_state, obj, op, oc.c_g, oc.lr);
        } else if (name == "rsav") {
          step = rsav_step(sav_state, obj, op, relax, oc.lr);
        } else if (name == "adaptive_rsav") {
          step = adaptive_rsav_step(sav_state, obj, op, relax, adapt);
        } else if (name == "rsavq") {
          step = rsavq_step(sav_state, obj, op, qp, oc.lr);
        } else {  // linesearch_sav
          step = linesearch_sav_step(sav_state, obj, op, qp, oc.lr, oc.wolfe);
        }
        rec = step.trace;
        if (rec.status == Status::ok) sav_state = std::move(step.state);
      }
    } catch (const std::exception& e) {
      rec.k = k;
      rec.status = Status::error;
      trace.push_back(rec);
      status = Status::error;
      std::cerr << "iteration " << k << ": " << e.what() << "\n";
      break;
    }

    if (rec.status == Status::ok && std::isfinite(rec.f) && rec.f > runaway_limit) {
      rec.status = Status::diverge;
    }
    if (!warned_big_dt && std::isfinite(rec.dt) && rec.dt > 1e12) {
      std::cerr << "note: step size exceeded 1e12 at iteration " << k << "\n";
      warned_big_dt = true;
    }
    trace.push_back(rec);
    if (rec.status != Status::ok) {
      status = rec.status;
      break;
    }
  }

  if (status == Status::ok) {
    // Terminal record for the final iterate.
    TraceRecord rec;
    rec.k = iterations;
    const Vec& theta = current_theta();
    rec.f = obj.value(theta);
    if (std::isfinite(rec.f)) {
      const Vec g = obj.gradient(theta);
      rec.grad_norm = g.allFinite() ? g.norm() : std::numeric_limits<double>::quiet_NaN();
    }
    if (sav_like) {
      rec.r = sav_state.r;
      rec.dt = sav_state.dt;
      if (std::isfinite(rec.f) && name != "legacy_sav") {
        const double fc = rec.f + obj.shift_c();
        if (fc > 0) rec.indicator = sav_state.r / std::sqrt(fc);
      }
    }
    if (!std::isfinite(rec.f)) rec.status = Status::diverge;
    trace.push_back(rec);
    status = rec.status;
  }

  RunResult out;
  out.trace = std::move(trace);
  out.summary.problem = cfg.problem.name;
  out.summary.optimizer = oc.name;
  out.summary.status = status;
  out.summary.iterations_run = out.trace.empty() ? 0 : static_cast<long>(out.trace.back().k);
  out.summary.final_loss = out.trace.empty() ? f0 : out.trace.back().f;
  out.summary.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

namespace {
void ensure_parent_dir(const std::string& path) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}
}  // namespace

RunResult run_and_write(const ExperimentConfig& cfg) {
  RunResult res = run_experiment(cfg);
  if (!cfg.outputs.trace_path.empty()) {
    ensure_parent_dir(cfg.outputs.trace_path);
    if (cfg.outputs.format == "json") {
      write_trace_json(res.trace, cfg.outputs.trace_path);
    } else {
      write_trace_csv(res.trace, cfg.outputs.trace_path);
    }
  }
  if (!cfg.outputs.plot_path.empty()) {
    ensure_parent_dir(cfg.outputs.plot_path);
    render_plot({{cfg.optimizer.name, res.trace}}, cfg.outputs.plot_path);
  }
  return res;
}

std::vector<CompareCell> run_compare(const CompareConfig& cfg) {
  if (!cfg.out_dir.empty()) std::filesystem::create_directories(cfg.out_dir);

  std::vector<CompareCell> cells;
  for (const OptimizerConfig& opt : cfg.optimizers) {
    // Without a step-size sweep each optimizer keeps its own configured lr.
    std::vector<double> steps = cfg.step_sizes;
    if (steps.empty()) steps.push_back(opt.lr);
    for (double dt : steps) {
      ExperimentConfig cell_cfg = cfg.base;
      cell_cfg.optimizer = opt;
      cell_cfg.optimizer.lr = dt;
      cell_cfg.outputs = OutputConfig{};
      if (!cfg.out_dir.empty()) {
        std::ostringstream name;
        name << opt.name << "_dt" << dt << ".csv";
        cell_cfg.outputs.trace_path = (std::filesystem::path(cfg.out_dir) / name.str()).string();
      }
      RunResult res = run_and_write(cell_cfg);
      CompareCell cell;
      cell.optimizer = opt.name;
      cell.step_size = dt;
      cell.summary = res.summary;
      cell.trace_path = cell_cfg.outputs.trace_path;
      cells.push_back(std::move(cell));
    }
  }
  if (!cfg.summary_path.empty()) write_summary_csv(cells, cfg.summary_path);
  return cells;
}

namespace {
std::string cell_text(const Summary& s) {
  if (s.status == Status::diverge) return "diverge";
  if (s.status == Status::error) return "error";
  std::ostringstream os;
  os.precision(4);
  os << s.final_loss;
  return os.str();
}
}  // namespace

std::string format_summary_table(const std::vector<CompareCell>& cells) {
  std::vector<std::string> optimizers;
  std::vector<double> steps;
  for (const auto& c : cells) {
    if (std::find(optimizers.begin(), optimizers.end(), c.optimizer) == optimizers.end()) {
      optimizers.push_back(c.optimizer);
    }
    if (std::find(steps.begin(), steps.end(), c.step_size) == steps.end()) {
      steps.push_back(c.step_size);
    }
  }
  std::ostringstream os;
  os << "optimizer";
  for (double s : steps) os << "\tdt=" << s;
  os << "\n";
  for (const auto& name : optimizers) {
    os << name;
    for (double s : steps) {
      for (const auto& c : cells) {
        if (c.optimizer == name && c.step_size == s) {
          os << "\t" << cell_text(c.summary);
          break;
        }
      }
    }
    os << "\n";
  }
  return os.str();
}

void write_summary_csv(const std::vector<CompareCell>& cells, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "optimizer,step_size,status,final_loss,iterations\n";
  for (const auto& c : cells) {
    out << c.optimizer << ',' << format_double(c.step_size) << ',' << status_name(c.summary.status)
        << ',' << format_double(c.summary.final_loss) << ',' << c.summary.iterations_run << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace savopt
