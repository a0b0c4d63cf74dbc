// Command-line front end. Exit codes: 0 success, 1 usage or configuration
// error, 2 runtime invariant violation.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "faslab/experiment.hpp"

namespace {

std::string experiment_list() {
  std::string out;
  for (faslab::ExperimentKind kind : faslab::all_experiments()) {
    if (!out.empty()) out += ", ";
    out += std::string(faslab::to_string(kind));
  }
  return out;
}

bool parse_seed(const std::string& text, std::uint64_t& seed) {
  try {
    // stoull wraps negative input instead of rejecting it.
    if (text.find('-') != std::string::npos) return false;
    std::size_t pos = 0;
    seed = std::stoull(text, &pos);
    return pos == text.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seeded fluid-antenna sampling, estimation and rate experiments"};
  app.get_formatter()->column_width(26);

  std::string experiment;
  app.add_option("experiment", experiment, "one of: " + experiment_list())->required();
  std::string config_path;
  app.add_option("--config", config_path, "key=value config file layered over defaults");
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "master seed (else FASLAB_SEED, else config)");
  int trials = 0;
  auto* trials_opt = app.add_option("--trials", trials, "Monte-Carlo trials");
  int jobs = 0;
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads (results independent of jobs)");
  std::string out_dir;
  auto* out_opt = app.add_option("--out", out_dir, "output directory (default '.')");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto kind = faslab::experiment_from_name(experiment);
  if (!kind) {
    std::cerr << "unknown experiment '" << experiment << "'; expected one of: " << experiment_list()
              << '\n';
    return 1;
  }

  try {
    faslab::ExperimentSpec spec = faslab::ExperimentSpec::defaults(*kind);
    if (!config_path.empty()) spec = faslab::load_config_file(config_path, spec);
    if (const char* env = std::getenv("FASLAB_SEED"); env && seed_opt->count() == 0) {
      if (!parse_seed(env, spec.seed)) {
        std::cerr << "FASLAB_SEED is not an unsigned integer: '" << env << "'\n";
        return 1;
      }
    }
    if (seed_opt->count() > 0) spec.seed = seed;
    if (trials_opt->count() > 0) spec.trials = trials;
    if (jobs_opt->count() > 0) spec.jobs = jobs;
    if (out_opt->count() > 0) spec.out_dir = out_dir;
    spec.validate();

    for (const std::string& file : faslab::run_experiment(spec))
      std::cout << "wrote " << file << '\n';
    return 0;
  } catch (const faslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const faslab::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
