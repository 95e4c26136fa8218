#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "costbc/analysis.hpp"

namespace costbc {

// A fully resolved experiment: command, scenario, sweep parameters, outputs.
struct ExperimentSpec {
  std::string command;  // ber | outage | verify | whiteness | lemma1
  std::string preset = "2hop_2x2x1";
  AllocationPolicy alloc{};
  std::vector<double> e_db = {20.0, 22.5, 25.0, 27.5, 30.0, 32.5, 35.0};
  std::vector<double> snr_db = {15.0, 16.5, 18.0, 19.5, 21.0, 22.5, 24.0,
                                25.5, 27.0, 28.5, 30.0};
  double r = 0.0;
  std::uint64_t seed = 1;
  bool seed_was_default = true;
  unsigned workers = 0;  // 0 = hardware parallelism
  std::uint64_t min_errors = 100;
  std::uint64_t max_frames = 1000000;
  std::uint64_t trials = 100000;  // outage / whiteness / lemma1
  std::string out;                // output path; empty = per-command default

  void validate() const;  // throws naming the offending key
};

// "lo:hi:step" inclusive sweep in dB.
std::vector<double> parse_range(const std::string& text);

// "equal" or comma-separated stage fractions "f0,f1,..".
AllocationPolicy parse_allocation(const std::string& text);

// Structured key-value text: `key = value`, '#' comments, keys matching the
// ExperimentSpec fields. Unknown keys and invariant violations are diagnosed
// by name.
ExperimentSpec load_config(const std::string& path);

// Executes the experiment, writing CSV artifacts plus a human-readable summary
// to `log`. Returns a process exit status (nonzero when a verify suite fails).
int run(const ExperimentSpec& spec, std::ostream& log);

}  // namespace costbc
