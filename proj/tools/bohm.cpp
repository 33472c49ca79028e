#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bohm/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Relativistic Bohmian trajectories, Newton-Wigner localization and Dirac spin identities"};
  app.set_version_flag("--version", BOHM_VERSION);
  app.require_subcommand(1);

  bohm::cli::Options opt;
  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"modes", "trajectory contours of a discrete plane-wave superposition"},
      {"explode", "cos2 packet: thresholds, densities, acausal probability, annihilation fronts"},
      {"nearnr", "near non-relativistic density difference and position map"},
      {"spin", "Dirac and Foldy-Wouthuysen identity checks"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opt.config, "run config (JSON)")->required();
    sub->add_option("--out", opt.out, "output directory")->required();
    sub->add_flag("--quick", opt.quick, "coarse grids and tolerances from the config's quick block");
    sub->add_option("--threads", opt.threads, "worker threads (speed only, never results)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bohm::cli::exit_config;
  }
  return bohm::cli::run(app.get_subcommands().front()->get_name(), opt, std::cerr);
}
