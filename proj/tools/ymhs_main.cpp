#include "ymhs/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  ymhs::tune_allocator();
  CLI::App app{"Lattice Yang-Mills-Higgs-Schroedinger flows on the flat torus"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "integrate a flow and write energy.csv");
  run->add_option("config", run_config, "JSON configuration")->required();

  std::string check_name;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> check_config;
  bool no_gauge_ode = false;
  auto* check = app.add_subcommand("check", "run a built-in property check");
  check->add_option("name", check_name, "variational, deturck, commutator, adjoint or gauge")
      ->required()
      ->check(CLI::IsMember({"variational", "deturck", "commutator", "adjoint", "gauge"}));
  check->add_option("--seed", seed, "seed for the randomized fixtures");
  check->add_option("--config", check_config, "JSON configuration supplying seed and thresholds");
  check->add_flag("--no-gauge-ode", no_gauge_ode, "deturck: disable the gauge ODE (negative control)");

  std::string study, conv_config;
  auto* conv = app.add_subcommand("convergence", "refinement study; writes convergence_<study>.csv");
  conv->add_option("study", study, "space, time or epsilon")
      ->required()
      ->check(CLI::IsMember({"space", "time", "epsilon"}));
  conv->add_option("config", conv_config, "JSON configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ymhs::kExitInvalid;
  }

  if (*run) return ymhs::cmd_run(run_config, std::cout, std::cerr);
  if (*check) {
    std::optional<std::filesystem::path> cfg;
    if (check_config) cfg = *check_config;
    return ymhs::cmd_check(check_name, seed, !no_gauge_ode, cfg, std::cout, std::cerr);
  }
  return ymhs::cmd_convergence(study, conv_config, std::cout, std::cerr);
}
