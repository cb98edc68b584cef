#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "savopt/config.hpp"
#include "savopt/plot.hpp"
#include "savopt/runner.hpp"
#include "savopt/verify.hpp"

namespace {

int exit_code_for(savopt::Status status) {
  switch (status) {
    case savopt::Status::ok: return 0;
    case savopt::Status::diverge: return 1;
    default: return 2;
  }
}

void print_summary(const savopt::Summary& s) {
  std::cout << "problem=" << s.problem << " optimizer=" << s.optimizer
            << " status=" << savopt::status_name(s.status) << " final_loss=" << s.final_loss
            << " iterations=" << s.iterations_run << " wall_ms=" << s.wall_ms << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAV-family optimizers and benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_override;

  auto* run_cmd = app.add_subcommand("run", "run one experiment from a config file");
  run_cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
  run_cmd->add_option("--seed", seed_override, "override the config seed");

  auto* cmp_cmd = app.add_subcommand("compare", "run an optimizer x step-size matrix");
  cmp_cmd->add_option("--config", config_path, "compare config (JSON)")->required();
  cmp_cmd->add_option("--seed", seed_override, "override the config seed");

  std::string scope = "all";
  auto* verify_cmd = app.add_subcommand("verify", "run the built-in invariant checks");
  verify_cmd->add_option("--scope", scope, "operators | sav | problems | all")
      ->check(CLI::IsMember({"operators", "sav", "problems", "all"}));

  std::string plot_out;
  std::vector<std::string> trace_files;
  auto* plot_cmd = app.add_subcommand("plot", "render trace CSVs as an SVG chart");
  plot_cmd->add_option("--out", plot_out, "output SVG path")->required();
  plot_cmd->add_option("traces", trace_files, "trace CSV files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      savopt::ExperimentConfig cfg = savopt::load_experiment_config(config_path);
      if (seed_override) cfg.problem.seed = *seed_override;
      savopt::RunResult res = savopt::run_and_write(cfg);
      print_summary(res.summary);
      return exit_code_for(res.summary.status);
    }
    if (cmp_cmd->parsed()) {
      savopt::CompareConfig cfg = savopt::load_compare_config(config_path);
      if (seed_override) cfg.base.problem.seed = *seed_override;
      const auto cells = savopt::run_compare(cfg);
      std::cout << savopt::format_summary_table(cells);
      bool any_diverge = false;
      for (const auto& c : cells) {
        if (c.summary.status == savopt::Status::error) return 2;
        any_diverge |= c.summary.status == savopt::Status::diverge;
      }
      return any_diverge ? 1 : 0;
    }
    if (verify_cmd->parsed()) {
      const savopt::VerifyReport report = savopt::verify_suite(scope);
      for (const auto& c : report.checks) {
        std::printf("%-55s %s  (measured %.3e, bound %.3e)\n", c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.measure, c.bound);
      }
      std::printf("%zu checks, %s\n", report.checks.size(),
                  report.all_pass() ? "all passed" : "FAILURES present");
      return report.all_pass() ? 0 : 1;
    }
    // plot
    std::vector<std::pair<std::string, savopt::Trace>> traces;
    for (const auto& file : trace_files) {
      traces.emplace_back(file, savopt::parse_trace_csv(file));
    }
    savopt::render_plot(traces, plot_out);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
