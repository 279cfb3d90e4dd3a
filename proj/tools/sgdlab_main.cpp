#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sgdlab/core/error.hpp"
#include "sgdlab/expcli/config.hpp"
#include "sgdlab/expcli/runner.hpp"

namespace {

constexpr int kValidationFailure = 2;
constexpr int kNumericAbort = 3;

void print_problems(const sgdlab::ValidationError& e) {
  std::cerr << "invalid config:\n";
  for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic dynamics of mini-batch SGD: simulations, Fokker-Planck solves and checks"};
  app.set_version_flag("--version", std::string(SGDLAB_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::string run_dir;

  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "YAML or JSON config")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output-dir", output_dir, "Override the config's output_dir");

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", config_path, "YAML or JSON config")->required()->check(CLI::ExistingFile);

  auto* report = app.add_subcommand("report", "Summarize a run directory and verify checksums");
  report->add_option("run_dir", run_dir, "Run directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      const auto c = sgdlab::load_config(config_path);
      std::cout << c.resolved().dump(2) << "\n";
      return 0;
    }
    if (*run) {
      const auto c = sgdlab::load_config(config_path);
      sgdlab::RunOptions opt;
      if (!output_dir.empty()) opt.output_dir = output_dir;
      const auto dir = sgdlab::run_experiment(c, opt);
      std::cout << dir.string() << "\n";
      return 0;
    }
    const auto r = sgdlab::report_run(run_dir);
    std::cout << r.dump(2) << "\n";
    return r.value("checksums_ok", false) && r.value("status", "") == "ok" ? 0 : 1;
  } catch (const sgdlab::ValidationError& e) {
    print_problems(e);
    return kValidationFailure;
  } catch (const sgdlab::NumericAbort& e) {
    std::cerr << "numeric abort: " << e.what() << "\n";
    return kNumericAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
