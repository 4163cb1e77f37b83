#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adiaq/family.hpp"

namespace adiaq {

/// One experiment, as read from a config file or assembled by the CLI.
/// The text format is versioned "key = value" lines; unknown keys are
/// rejected so stale configs fail loudly instead of running the wrong
/// study.
struct ExperimentConfig {
  std::string kind;            // gap-sweep, separable, grover-search, gh1-search,
                               // shift-search, random-final, sat-gap, positivity,
                               // evolve, scaling-study
  std::string family;          // separable, grover, gh1, shift, random, sat
  int n = 8;
  int n_lo = 4, n_hi = 10;     // scaling-study range
  std::uint64_t target = 0;    // marked basis state for the search families
  std::uint64_t seed = 1;
  std::string cnf;             // DIMACS path; empty means a random instance
  int clauses = 0;             // random instance size; 0 picks 4n
  std::int64_t law_lo = 0, law_hi = 0;  // random final law; hi <= 0 means n
  int grid = 101;
  double tol = 1e-10;
  double total_time = 0.0;     // evolve only
  double f_star = 0.9;         // scaling-study target fidelity
  int trotter_m = 64;
  std::vector<double> s_values;  // positivity checkpoints; empty picks defaults
  int trace_samples = 33;
  int threads = 1;
  std::string out_dir = "out";
};

ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& config);

ExperimentConfig load_config_file(const std::string& path);

/// Build the interpolating family an experiment acts on; `n` overrides
/// config.n so range studies can reuse the construction.
InterpolatingFamily family_from_config(const ExperimentConfig& config, int n);

/// Run one experiment, writing artifacts and a manifest into
/// config.out_dir. Returns 0 on success; on failure writes error.json
/// with the exception type and message and returns 1.
int run_experiment(const ExperimentConfig& config);

}  // namespace adiaq
