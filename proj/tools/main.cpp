#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hcb/errors.hpp"
#include "hcb/experiments.hpp"

namespace {

struct CommandArgs {
  std::string config;
  std::string out;
};

template <typename Runner>
int run_command(const CommandArgs& args, hcb::Scenario scenario, Runner runner) {
  try {
    const hcb::ScenarioConfig config = hcb::load_scenario(args.config, scenario);
    runner(config, std::filesystem::path(args.out));
    std::cout << "wrote " << args.out << "\n";
    return 0;
  } catch (const hcb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hcb::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hcb::GuardError& e) {
    std::cerr << "guard tripped: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

void add_command(CLI::App& app, int& exit_code, const std::string& name,
                 const std::string& description, hcb::Scenario scenario, auto runner) {
  auto args = std::make_shared<CommandArgs>();
  CLI::App* cmd = app.add_subcommand(name, description);
  cmd->add_option("--config", args->config, "scenario configuration file (JSON)")->required();
  cmd->add_option("--out", args->out, "output directory")->required();
  cmd->callback([&exit_code, args, scenario, runner] {
    exit_code = run_command(*args, scenario, runner);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-diagonalization thermalization experiments for hard-core bosons"};
  app.require_subcommand(1);
  int exit_code = 0;

  add_command(app, exit_code, "spectrum", "level-spacing statistics of the full Hamiltonian",
              hcb::Scenario::kSpectrumStats,
              [](const auto& c, const auto& out) { hcb::run_spectrum_stats(c, out); });
  add_command(app, exit_code, "quench", "quench from the confined ground state and compare ensembles",
              hcb::Scenario::kQuench,
              [](const auto& c, const auto& out) { hcb::run_quench(c, out); });
  add_command(app, exit_code, "sweep-initial", "quench from a family of product initial states",
              hcb::Scenario::kInitialStateSweep,
              [](const auto& c, const auto& out) { hcb::run_initial_state_sweep(c, out); });
  add_command(app, exit_code, "sweep-lattice", "run the quench pipeline over several lattices",
              hcb::Scenario::kLatticeSweep,
              [](const auto& c, const auto& out) { hcb::run_lattice_sweep(c, out); });
  add_command(app, exit_code, "mixed", "evolve a two-temperature product thermal state",
              hcb::Scenario::kMixedTemperature,
              [](const auto& c, const auto& out) { hcb::run_mixed_temperature(c, out); });
  add_command(app, exit_code, "entanglement", "pair concurrences and subsystem entropy over time",
              hcb::Scenario::kEntanglement,
              [](const auto& c, const auto& out) { hcb::run_entanglement(c, out); });

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
