// hwlab: command-line front end for the experiments in hwlab/lab/experiments.hpp.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>

#include "hwlab/lab/experiments.hpp"

namespace {

std::string flag_name(const std::string& key) { return "--" + key; }

// "grid.nx" is also reachable as --nx when the short name is unambiguous
std::string flag_names(const std::string& key) {
  const std::string tail = key.substr(key.find('.') + 1);
  int uses = 0;
  for (const auto& k : hwlab::lab::config_keys()) uses += k.substr(k.find('.') + 1) == tail;
  std::string names = flag_name(key);
  if (uses == 1) names += ",--" + tail;
  if (key == "output.out_dir") names += ",--out";
  return names;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hwlab;
  using namespace hwlab::lab;

  CLI::App app{"hwlab: pseudospectral lab for the focusing half-wave Schroedinger equation"};
  std::string command;
  std::string config_path;
  app.add_option("command", command, "ground-state | travel | evolve | stability | instability | sweep-velocity | verify")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "key = value configuration file");

  std::map<std::string, std::string> overrides;
  for (const auto& key : config_keys()) {
    if (key == "command") continue;
    app.add_option(flag_names(key), overrides[key], "override " + key);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      if (!std::filesystem::exists(config_path)) throw UsageError("config file not found: " + config_path);
      cfg = load_config(config_path);
    }
    cfg.command = command;
    for (const auto& key : config_keys()) {
      if (key == "command") continue;
      if (app.count(flag_name(key)) > 0) set(cfg, key, overrides[key]);
    }
    const CommandResult r = run_command(cfg);
    std::cout << r.report.dump(2) << std::endl;
    return r.exit_code;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
