#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "freeclark/json_io.hpp"

namespace freeclark {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes of the command line tool.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInput = 2 };

struct Check {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  int safe_degree = -1;
  bool pass = false;
  double runtime_ms = 0.0;
  std::string note;
};

json check_to_json(const Check& c);

struct VerifyConfig {
  int N = -1;                 // -1: instance truncation
  std::string suite = "all";  // all|herglotz|gns|clark|lift|realize
  std::optional<double> tol;  // overrides every tolerance
  std::map<std::string, double> tolerances;  // per-check overrides
  std::uint64_t seed = 0;     // seeds the random unitary, extension and points
};

/// Runs the selected suites; checks are returned sorted by name.
std::vector<Check> run_suites(const Instance& inst, const VerifyConfig& cfg);

/// Full report object for a list of checks.
json make_report(const std::vector<Check>& checks, const json& config);

/// Entry point of the freeclark executable.  Output goes to stdout/stderr or -o files.
int run_cli(int argc, char** argv);

}  // namespace freeclark
