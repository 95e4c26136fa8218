#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "costbc/experiment.hpp"
#include "costbc/version.hpp"

namespace {

struct CliValues {
  std::string config;
  std::string preset;
  std::string alloc;
  std::string e_db;
  std::string snr_db;
  std::string out;
  double r = 0.0;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::uint64_t min_errors = 0;
  std::uint64_t max_frames = 0;
  std::uint64_t trials = 0;
};

void add_common(CLI::App* cmd, CliValues& v) {
  cmd->add_option("--config", v.config, "experiment config file (key = value lines)");
  cmd->add_option("--preset", v.preset, "network preset, e.g. 2hop_2x2x1");
  cmd->add_option("--alloc", v.alloc, "power allocation: 'equal' or fractions f0,f1,..");
  cmd->add_option("--seed", v.seed, "master seed (default 1)");
  cmd->add_option("--workers", v.workers, "worker threads (default: hardware)");
  cmd->add_option("--out", v.out, "output CSV path");
}

// flags override whatever the config file set
costbc::ExperimentSpec build_spec(const CLI::App* cmd, const CliValues& v,
                                  const std::string& command) {
  const auto given = [cmd](const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  costbc::ExperimentSpec spec;
  if (given("--config")) spec = costbc::load_config(v.config);
  spec.command = command;
  if (given("--preset")) spec.preset = v.preset;
  if (given("--alloc")) spec.alloc = costbc::parse_allocation(v.alloc);
  if (given("--e-db")) spec.e_db = costbc::parse_range(v.e_db);
  if (given("--snr-db")) spec.snr_db = costbc::parse_range(v.snr_db);
  if (given("--r")) spec.r = v.r;
  if (given("--seed")) {
    spec.seed = v.seed;
    spec.seed_was_default = false;
  }
  if (given("--workers")) spec.workers = v.workers;
  if (given("--min-errors")) spec.min_errors = v.min_errors;
  if (given("--max-frames")) spec.max_frames = v.max_frames;
  if (given("--trials")) spec.trials = v.trials;
  if (given("--out")) spec.out = v.out;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("costbc ") + costbc::kVersion +
               " — cascaded orthogonal space-time block code simulator"};
  app.require_subcommand(1);

  CliValues v;

  CLI::App* ber = app.add_subcommand("ber", "Monte Carlo bit-error-rate sweep over total power");
  add_common(ber, v);
  ber->add_option("--e-db", v.e_db, "total power sweep, dB: lo:hi:step or comma list");
  ber->add_option("--min-errors", v.min_errors, "stop a point after this many bit errors");
  ber->add_option("--max-frames", v.max_frames, "frame cap per point");

  CLI::App* outage = app.add_subcommand("outage", "separated-channel outage probability sweep");
  add_common(outage, v);
  outage->add_option("--snr-db", v.snr_db, "SNR sweep, dB: lo:hi:step or comma list");
  outage->add_option("--r", v.r, "multiplexing gain, 0 <= r < 1");
  outage->add_option("--trials", v.trials, "channel draws per point");

  CLI::App* verify = app.add_subcommand("verify", "structural property suites, pass/fail table");
  add_common(verify, v);

  CLI::App* whiteness = app.add_subcommand("whiteness", "separated-noise covariance diagnostics");
  add_common(whiteness, v);
  whiteness->add_option("--e-db", v.e_db, "total power (first value used), dB");
  whiteness->add_option("--trials", v.trials, "noise-only frames");

  CLI::App* lemma1 = app.add_subcommand("lemma1", "noise-covariance eigenvalue bound check");
  add_common(lemma1, v);
  lemma1->add_option("--trials", v.trials, "random (G, x) probes per antenna pair");

  CLI11_PARSE(app, argc, argv);

  CLI::App* cmd = app.get_subcommands().front();
  try {
    const costbc::ExperimentSpec spec = build_spec(cmd, v, cmd->get_name());
    return costbc::run(spec, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "costbc: " << e.what() << "\n";
    return 2;
  }
}
