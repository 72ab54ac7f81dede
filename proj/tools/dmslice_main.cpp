#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dmslice/experiment.hpp"
#include "dmslice/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact experiments for discrete multilinear maximal functions"};
  std::string config_path;
  std::string out_dir = "out";
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  bool list = false;
  app.add_option("--config", config_path, "key = value experiment file");
  app.add_option("--out", out_dir, "directory for summary.json and detail.csv");
  app.add_option("--workers", workers, "worker threads (overrides DMSLICE_WORKERS)")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_flag("--list-experiments", list, "print the experiment kinds and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dmslice::exit_config;
  }

  if (list) {
    for (const auto& k : dmslice::experiment_kinds()) std::cout << k.name << "\t" << k.description << "\n";
    return 0;
  }
  if (config_path.empty()) {
    std::cerr << "config error: field `config`: --config is required\n";
    return dmslice::exit_config;
  }
  if (workers) dmslice::parallel::set_worker_count(*workers);

  try {
    const auto cfg = dmslice::ExperimentConfig::load(config_path);
    const auto result = dmslice::run_experiment(cfg, seed);
    dmslice::write_outputs(result, out_dir);
    std::cout << result.summary_json;
    return result.exit_code;
  } catch (const dmslice::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return dmslice::exit_config;
  } catch (const dmslice::InvariantError& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return dmslice::exit_invariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return dmslice::exit_config;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return dmslice::exit_invariant;
  }
}
