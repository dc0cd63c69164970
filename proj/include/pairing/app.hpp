#pragma once
// Task execution for the command-line front end.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pairing/config.hpp"
#include "pairing/extrapolate.hpp"

namespace pairing {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verify failures, unexpected errors
inline constexpr int kExitNonConvergence = 2;
inline constexpr int kExitInvalidConfig = 3;
inline constexpr int kExitDimensionCap = 4;

// Runs the configured task, writing the result to config.path or `out`.
// Errors propagate as exceptions; see exit_code_for() and error_json().
int run(const RunConfig& config, std::ostream& out);

int exit_code_for(const std::exception& e) noexcept;
// One-line {"error": ..., "kind": ...} object.
std::string error_json(const std::exception& e);

// Numbers are printed with 9 significant digits.
std::string format_number(double x);
double round_significant(double x);

// ---------------------------------------------------------------------------
// Series CSV: header "N,observable,value", rows by ascending N, observables
// in the order e_per_n, e_q, delta_oe, delta_c.

inline constexpr std::string_view kObservables[] = {"e_per_n", "e_q", "delta_oe", "delta_c"};

struct SeriesRow {
  int n = 0;
  std::string observable;
  double value = 0.0;
};

void emit_series(std::vector<SeriesRow> rows, std::ostream& out);
// Points of one observable; `source` names the input in error messages.
// Throws ConfigError on malformed input.
std::vector<SeriesPoint> read_series(std::istream& in, std::string_view observable, std::string_view source);

// Sweep rows for the configured grid.
std::vector<SeriesRow> sweep(const RunConfig& config);

// ---------------------------------------------------------------------------
// Invariant suite behind `verify`.

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<VerifyCheck> run_verify_suite(int threads);

}  // namespace pairing
