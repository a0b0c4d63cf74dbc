#pragma once

#include <complex>
#include <span>
#include <vector>

#include "faslab/rng.hpp"

namespace faslab {

// Pilot-based estimation of one channel coefficient. Each sample position gets
// a sub-block of `pilots_per_sample` known symbols with power split evenly
// across the I and Q rails, so the complex least-squares estimate decouples
// into independent real and imaginary estimators, each with error variance
// 1/(pilots_per_sample * snr).
struct PilotConfig {
  int pilots_per_sample = 7;
  double snr = 100.0;  // linear symbol-power to noise-power ratio

  void validate() const;  // throws std::invalid_argument
};

// Target accuracy for the per-real-part estimation error: requires
// P(|error| < epsilon) >= confidence.
struct CiSpec {
  double epsilon = 0.1;
  double confidence = 0.95;

  void validate() const;
};

// Known per-real-rail pilot amplitudes (unit power per rail).
std::vector<double> pilot_amplitudes(int pilots_per_sample);

// Received pilot block for a fixed channel value: r_z = a_z * h + w_z with
// complex white noise of per-real-part variance 1/snr times a_z^2 scale.
std::vector<std::complex<double>> simulate_pilots(std::complex<double> channel,
                                                  const PilotConfig& config, Rng& rng);

// Least-squares / maximum-likelihood estimate sum(a_z r_z) / sum(a_z^2).
// Throws std::domain_error when the amplitude vector has zero energy or
// sizes mismatch.
std::complex<double> mle_estimate(std::span<const std::complex<double>> received,
                                  std::span<const double> amplitudes);

// simulate_pilots + mle_estimate for one channel value.
std::complex<double> estimate_channel(std::complex<double> channel,
                                      const PilotConfig& config, Rng& rng);

// Standard deviation of each real part of the estimation error.
double estimator_error_std(const PilotConfig& config);

// P(|per-real-part error| < epsilon) = erf(epsilon * sqrt(pilots_per_sample * snr / 2)).
double ci_probability(double epsilon, int pilots_per_sample, double snr);

// Smallest pilots_per_sample meeting the CiSpec (monotone search).
// Throws std::domain_error when confidence >= 1 (unreachable target).
int min_pilots(const CiSpec& target, double snr);

// Closed-form counterpart ceil(2*(erf_inv(confidence)/epsilon)^2 / snr);
// kept separate so tests can cross-check the search route.
int min_pilots_closed_form(const CiSpec& target, double snr);

// Total pilot symbols for a sample set: pilots_per_sample * sample_count.
long long pilot_budget(int pilots_per_sample, long long sample_count);

// True when the pilot budget leaves room for data inside the coherence block.
bool budget_feasible(long long pilot_total, long long coherence_symbols);

}  // namespace faslab
