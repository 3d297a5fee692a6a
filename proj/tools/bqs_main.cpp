#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "bqs/errors.hpp"
#include "bqs/parallel.hpp"
#include "bqs/runner.hpp"
#include "bqs/scenario_config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pseudospectral solver for the damped-inertia Boussinesq Cauchy problem"};
  app.require_subcommand(1);

  int threads = 1;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  bool quiet = false;
  app.add_option("--threads", threads, "worker threads, 0 = hardware count")
      ->capture_default_str();
  app.add_option("--seed", seed, "seed for sampled majorants and probe ensembles")
      ->capture_default_str();
  app.add_flag("--quiet", quiet, "suppress console summaries");

  std::string config_path;
  const auto add = [&](const char* name, const char* desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->fallthrough();  // global flags may follow the subcommand
    sub->add_option("config", config_path, "scenario file")->required();
    return sub;
  };
  CLI::App* cmd_run = add("run", "solve the configured scenario");
  CLI::App* cmd_linear = add("linear", "solve with the nonlinearity forced to zero");
  CLI::App* cmd_check = add("check", "inequality, kernel and multiplier analysis suite");
  CLI::App* cmd_conv = add("convergence", "time-step and grid refinement error tables");
  (void)cmd_run;

  CLI11_PARSE(app, argc, argv);

  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  bqs::set_thread_count(threads > 0 ? threads : 1);

  bqs::RunMode mode = bqs::RunMode::Run;
  if (cmd_linear->parsed()) mode = bqs::RunMode::Linear;
  if (cmd_check->parsed()) mode = bqs::RunMode::Check;
  if (cmd_conv->parsed()) mode = bqs::RunMode::Convergence;

  try {
    const bqs::ScenarioConfig cfg = bqs::load_config(config_path);
    return bqs::run_scenario(cfg, mode, seed, quiet, std::cout);
  } catch (const bqs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
