#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "faslab/reconstruction.hpp"

namespace faslab {

struct RateConfig {
  double bandwidth_hz = 30000.0;      // B
  long long coherence_symbols = 1200; // Z, symbols with a constant channel
  double snr = 100.0;                 // linear transmit-power to noise-density ratio

  void validate() const;  // throws std::invalid_argument
};

// Shannon rate with perfect channel knowledge: B * log2(1 + |h|^2 * snr / B).
double rate_perfect(std::complex<double> h, const RateConfig& config);

// Fixed-antenna baseline; same formula, the port is not chosen.
double rate_tas(std::complex<double> h, const RateConfig& config);

// Rate with pilot overhead and residual estimation error at the chosen port:
// B * (1 - pilot_total/Z) * log2(1 + |h_true|^2 snr / (|h_true - h_est|^2 snr + B)).
// Returns 0 when the pilot budget consumes the whole coherence block.
double rate_imperfect(std::complex<double> h_true, std::complex<double> h_est,
                      long long pilot_total, const RateConfig& config);

struct PortChoice {
  Eigen::Index row = 0, col = 0;
  double x = 0.0, y = 0.0;
  std::complex<double> value;
};

// Grid node with the largest |value|^2.
PortChoice best_port(const Eigen::MatrixXcd& values, const DenseGrid& grid);

enum class RateSweepKind { pilots_per_sample, aperture_width };

struct RateSweepSpec {
  RateSweepKind kind = RateSweepKind::pilots_per_sample;
  std::vector<double> values;   // pilots counts or widths, depending on kind
  double width = 2.0;           // fixed width for the pilot sweep
  int pilots_per_sample = 7;    // fixed pilots for the width sweep
  int lobe_order = 0;
  int spectral_length = 32;
  int nodes_per_sample = 16;
  int trials = 500;
  int jobs = 1;
  std::uint64_t seed = 1;
  RateConfig rate;

  void validate() const;
};

struct RatePoint {
  double sweep_value = 0.0;
  int pilots_per_sample = 0;
  double width = 0.0;
  long long samples_total = 0;
  long long pilot_total = 0;
  bool feasible = true;
  int trials = 0;
  double perfect_mean = 0.0, perfect_se = 0.0;
  double imperfect_mean = 0.0, imperfect_se = 0.0;
  double tas_mean = 0.0, tas_se = 0.0;
};

// Monte-Carlo sweep of the three rates. Field realizations are shared across
// sweep points within a trial (they do not depend on the swept variable), so
// point-to-point comparisons are paired. Deterministic for a given spec: trial
// results go to preassigned slots and are reduced in trial order regardless of
// the number of jobs. Enforces rate_perfect >= rate_tas per realization.
std::vector<RatePoint> monte_carlo_rates(const RateSweepSpec& spec);

}  // namespace faslab
