// Command-line front end: pairing <task> [--config file.ini] [--key value ...]
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "pairing/app.hpp"
#include "pairing/config.hpp"
#include "pairing/errors.hpp"

namespace {

std::string flag_for(std::string_view key) {
  std::string flag = "--";
  for (char ch : key) flag += ch == '_' ? '-' : ch;
  return flag;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solvers for four-species pairing Hamiltonians"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  int threads = 0;
  app.add_option("--config", config_path, "INI file with [model], [task], [output] sections");
  app.add_option("--threads", threads, "worker threads for matrix-vector products (default $PAIRING_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  std::map<std::string, std::string> flag_values;
  for (const auto& k : pairing::config_keys()) {
    if (k.section == "task" && k.key == "name") continue;
    std::string names = flag_for(k.key);
    if (k.key == "input") names += ",--in";
    if (k.key == "path") names += ",--out";
    const std::string full = std::string(k.section) + "." + std::string(k.key);
    app.add_option(names, flag_values[full], std::string(k.help))->group(std::string(k.section));
  }

  app.add_subcommand("run", "run the task named in the config file");
  for (std::string_view task : pairing::kTasks) app.add_subcommand(std::string(task), "run the " + std::string(task) + " task");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pairing::kExitInvalidConfig;
  }

  try {
    pairing::KeyValues values = config_path.empty() ? pairing::KeyValues{} : pairing::read_ini(config_path);
    pairing::KeyValues overrides;
    for (const auto& [key, value] : flag_values) {
      const std::string flag = flag_for(key.substr(key.find('.') + 1));
      if (app.count(flag) > 0) overrides[key] = value;
    }
    const std::string task = app.get_subcommands().front()->get_name();
    if (task != "run") overrides["task.name"] = task;
    values = pairing::merge(std::move(values), overrides);

    pairing::RunConfig config = pairing::resolve_config(values);
    config.threads = threads > 0 ? threads : pairing::threads_from_environment();
    return pairing::run(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << pairing::error_json(e) << '\n';
    return pairing::exit_code_for(e);
  }
}
