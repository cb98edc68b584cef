#pragma once

#include <memory>
#include <string>
#include <vector>

#include "savopt/config.hpp"
#include "savopt/objective.hpp"
#include "savopt/operators.hpp"
#include "savopt/trace.hpp"

namespace savopt {

struct Summary {
  std::string problem;
  std::string optimizer;
  Status status = Status::ok;
  double final_loss = std::numeric_limits<double>::quiet_NaN();
  long iterations_run = 0;
  double wall_ms = 0.0;
};

struct RunResult {
  Trace trace;
  Summary summary;
};

/// Fully built problem stack: the problem itself plus optional noise and
/// mini-batch wrappers. `active` is what the optimizer sees.
struct ProblemInstance {
  std::unique_ptr<Objective> base;
  std::unique_ptr<NoisyGradient> noisy;
  std::unique_ptr<MiniBatchObjective> batched;
  Objective* active = nullptr;
  Vec init;
};

ProblemInstance build_problem(const ExperimentConfig& cfg);
LinearOperator build_operator(const OperatorConfig& op_cfg, const Objective& problem);

/// Runs one experiment. Deterministic: identical configs produce identical
/// traces. Divergence is recorded in the trace/summary, never thrown.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Runs and writes the configured outputs (trace file, optional plot).
RunResult run_and_write(const ExperimentConfig& cfg);

struct CompareCell {
  std::string optimizer;
  double step_size = 0.0;
  Summary summary;
  std::string trace_path;
};

/// Optimizer x step-size matrix; one trace per cell.
std::vector<CompareCell> run_compare(const CompareConfig& cfg);

/// Rows = optimizers, columns = step sizes, "diverge" rendered verbatim.
std::string format_summary_table(const std::vector<CompareCell>& cells);
void write_summary_csv(const std::vector<CompareCell>& cells, const std::string& path);

}  // namespace savopt
