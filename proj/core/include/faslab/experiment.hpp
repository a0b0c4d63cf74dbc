#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faslab/errors.hpp"

namespace faslab {

// Canned, seeded Monte-Carlo studies writing CSV tables plus a JSON sidecar
// with every resolved parameter. Re-running with the same spec and seed
// reproduces the outputs byte for byte.
enum class ExperimentKind {
  recon_demo_1d,   // one 1D realization: truth, samples, reconstructions
  recon_demo_2d,   // same on a square aperture
  spectrum,        // power spectra of truth, sampled train, reconstructions
  sweep_distance,  // reconstruction NMSE across sampling distances and SNRs
  sweep_width,     // 1D NMSE gap between half-wavelength and leakage-aware spacing
  ci_validate,     // analytic vs empirical estimation confidence
  rate_vs_zp,      // rates across pilots-per-sample
  rate_vs_width,   // rates across aperture widths
};

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_name(std::string_view name);
const std::vector<ExperimentKind>& all_experiments();

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::recon_demo_2d;

  // Shared physical defaults.
  long long coherence_symbols = 1200;
  double bandwidth_hz = 30000.0;
  int pilots_per_sample = 7;
  double snr_db = 20.0;
  int spectral_length = 32;
  double width = 2.0;
  int lobe_order = 0;

  // Estimation-accuracy study.
  double epsilon = 0.1;
  double confidence = 0.95;
  int zp_min = 1;
  int zp_max = 16;

  // Sweep axes (per-kind defaults; comma lists in config files).
  std::vector<double> widths;
  std::vector<double> snr_db_list;
  int max_lobe = 2;

  // Execution.
  int trials = 200;
  int grid_per_sample = 32;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out_dir = ".";

  static ExperimentSpec defaults(ExperimentKind kind);
  void validate() const;  // throws ConfigError
};

// Flat key=value format: one pair per line, '#' comments, blank lines ignored,
// lists comma-separated. Unknown keys and malformed values raise ConfigError
// naming the key and line.
ExperimentSpec parse_config_text(std::string_view text, ExperimentSpec base);
ExperimentSpec load_config_file(const std::string& path, ExperimentSpec base);

// Runs the experiment, writing <out_dir>/<name>*.csv and <out_dir>/<name>.json.
// Returns the list of files written. One-line progress summaries go to `log`
// (std::cout in the single-argument form).
std::vector<std::string> run_experiment(const ExperimentSpec& spec);
std::vector<std::string> run_experiment(const ExperimentSpec& spec, std::ostream& log);

}  // namespace faslab
