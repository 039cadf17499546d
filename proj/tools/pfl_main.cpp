#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pfl/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scalar-field / relativistic-particle laboratory"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"soliton", "construct a traveling soliton state and export it"},
      {"audit", "velocity sweep of the soliton energy and its bound chain"},
      {"simulate", "integrate the coupled system and monitor conservation"},
      {"experiment", "non-attraction counterexample runs (part_i / part_ii)"},
      {"convergence", "dt and grid refinement study"},
  };

  std::string config_path;
  std::string chosen;
  for (const auto& sub : subs) {
    auto* cmd = app.add_subcommand(sub.name, sub.help);
    cmd->add_option("config", config_path, "JSON run configuration")->required();
    cmd->callback([&chosen, name = std::string(sub.name)]() { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const pfl::RunConfig cfg = pfl::RunConfig::load(config_path, chosen);
    return pfl::dispatch(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
