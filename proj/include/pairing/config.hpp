#pragma once
// Run configuration for the command-line front end.
//
// A configuration is a flat map of "section.key" strings, read from an INI
// file with sections [model], [task] and [output] and overridden by flags.
// resolve_config() validates everything before any computation starts.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pairing/ed.hpp"
#include "pairing/models.hpp"

namespace pairing {

using KeyValues = std::map<std::string, std::string>;

struct ConfigKey {
  std::string_view section;
  std::string_view key;
  std::string_view help;
};

// Every accepted key; anything else is rejected.
const std::vector<ConfigKey>& config_keys();

inline constexpr std::string_view kTasks[] = {"seniority", "ed",    "bcs-bulk", "bcs-finite",
                                              "sweep",     "extrapolate", "verify"};

// Throws ConfigError on unreadable files, syntax errors and unknown keys.
KeyValues read_ini(const std::string& path);

// Values in `overrides` replace those in `base`.
KeyValues merge(KeyValues base, const KeyValues& overrides);

struct RunConfig {
  std::string task;

  ModelSpec model;
  bool coupling_given = false;
  bool n_given = false;

  // seniority
  std::optional<int> seniority;
  std::optional<double> isospin;
  double reduced_isospin = 0.0;
  std::optional<int> lambda2;

  // ed
  std::size_t k = 1;
  LanczosOptions lanczos;
  SectorConstraints constraints;
  bool labels = true;
  std::size_t dimension_cap = kDefaultDimensionCap;

  // bcs
  double filling = 1.0;
  std::optional<double> eps_q;

  // sweep
  std::string solver = "ed";  // ed | bcs
  std::string sweep_over = "omega";  // omega | n
  std::vector<int> values;

  // extrapolate
  std::string input;
  std::string observable = "e_per_n";
  int degree = 3;

  // output
  std::string format = "json";  // json | csv
  std::string path;              // empty: stdout

  int threads = 1;
};

// Throws ConfigError with the offending key in the message.
RunConfig resolve_config(const KeyValues& values);

// PAIRING_THREADS, or 1 when unset or invalid.
int threads_from_environment();

}  // namespace pairing
