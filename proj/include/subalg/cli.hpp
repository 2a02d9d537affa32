#pragma once

// Batch experiment runner behind the subalg_cli tool.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "subalg/io.hpp"

namespace subalg::cli {

enum ExitCode { kPass = 0, kCheckFailure = 1, kConfigError = 2 };

struct ExperimentConfig {
  std::string task;  // duality, aep, stein, dilution, decompose, axioms
  std::string state = "plus";
  std::string algebra = "diagonal(2)";
  std::vector<double> eps;    // empty: task defaults
  std::vector<double> alpha;  // empty: {1/2, 1, 2, inf}
  int n_max = 0;              // 0: task default
  double tol = 1e-7;
  std::uint64_t seed = 0xC0FFEE;
  std::string out;  // empty: stdout
  std::string format = "json";
  // Inline objects from a config file; take precedence over the names above when set.
  Json state_inline;
  Json algebra_inline;
};

const std::vector<std::string>& tasks();
// Algebra and state preset names with their argument patterns.
std::vector<std::string> presets();

// trivial(d), diagonal(d), full(d), factor(m,n), swap, or a JSON file path.
Subalgebra resolve_algebra(const std::string& spec);
// plus, ghz, mixed, random, random(seed), or a JSON file path. dim comes from the algebra.
Mat resolve_state(const std::string& spec, int dim, std::uint64_t seed);

// Flags override values from --config. Throws ConfigError.
ExperimentConfig parse_command_line(const std::vector<std::string>& args);
// Applies defaults and checks the dimension budget. Throws ConfigError.
ExperimentConfig normalized(ExperimentConfig c);

struct RunResult {
  int exit_code = kPass;
  Json document;  // header, rows, checks
};
RunResult run_experiment(const ExperimentConfig& c);

// Full pipeline: parse, run, write. Never throws.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace subalg::cli
