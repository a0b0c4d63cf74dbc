#include "faslab/pilot.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "faslab/numerics.hpp"

namespace faslab {

void PilotConfig::validate() const {
  if (pilots_per_sample < 1)
    throw std::invalid_argument("PilotConfig: pilots_per_sample must be >= 1");
  if (!(snr > 0.0)) throw std::invalid_argument("PilotConfig: snr must be positive");
}

void CiSpec::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("CiSpec: epsilon must be positive");
  if (!(confidence > 0.0) || confidence >= 1.0)
    throw std::invalid_argument("CiSpec: confidence must lie in (0, 1)");
}

std::vector<double> pilot_amplitudes(int pilots_per_sample) {
  if (pilots_per_sample < 1)
    throw std::invalid_argument("pilot_amplitudes: pilots_per_sample must be >= 1");
  return std::vector<double>(static_cast<std::size_t>(pilots_per_sample), 1.0);
}

std::vector<std::complex<double>> simulate_pilots(std::complex<double> channel,
                                                  const PilotConfig& config, Rng& rng) {
  config.validate();
  const auto amps = pilot_amplitudes(config.pilots_per_sample);
  const double noise_std = std::isinf(config.snr) ? 0.0 : std::sqrt(1.0 / config.snr);
  std::vector<std::complex<double>> received(amps.size());
  for (std::size_t z = 0; z < amps.size(); ++z)
    received[z] = amps[z] * channel + noise_std * rng.normal_complex();
  return received;
}

std::complex<double> mle_estimate(std::span<const std::complex<double>> received,
                                  std::span<const double> amplitudes) {
  if (received.size() != amplitudes.size())
    throw std::domain_error("mle_estimate: received/amplitude size mismatch");
  double energy = 0.0;
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t z = 0; z < received.size(); ++z) {
    acc += amplitudes[z] * received[z];
    energy += amplitudes[z] * amplitudes[z];
  }
  if (energy <= 0.0) throw std::domain_error("mle_estimate: pilot energy is zero");
  return acc / energy;
}

std::complex<double> estimate_channel(std::complex<double> channel,
                                      const PilotConfig& config, Rng& rng) {
  const auto received = simulate_pilots(channel, config, rng);
  const auto amps = pilot_amplitudes(config.pilots_per_sample);
  return mle_estimate(received, amps);
}

double estimator_error_std(const PilotConfig& config) {
  config.validate();
  if (std::isinf(config.snr)) return 0.0;
  return std::sqrt(1.0 / (config.pilots_per_sample * config.snr));
}

double ci_probability(double epsilon, int pilots_per_sample, double snr) {
  if (!(epsilon > 0.0)) throw std::domain_error("ci_probability: epsilon must be positive");
  if (pilots_per_sample < 1)
    throw std::domain_error("ci_probability: pilots_per_sample must be >= 1");
  if (!(snr > 0.0)) throw std::domain_error("ci_probability: snr must be positive");
  return std::erf(epsilon * std::sqrt(0.5 * pilots_per_sample * snr));
}

int min_pilots(const CiSpec& target, double snr) {
  if (target.confidence >= 1.0)
    throw std::domain_error("min_pilots: confidence target of 1 is unreachable");
  target.validate();
  if (!(snr > 0.0)) throw std::domain_error("min_pilots: snr must be positive");

  // ci_probability is monotone in the pilot count: gallop to a satisfying
  // count, then binary-search the boundary.
  int hi = 1;
  while (ci_probability(target.epsilon, hi, snr) < target.confidence) {
    if (hi > (1 << 28)) throw std::domain_error("min_pilots: target out of reach");
    hi *= 2;
  }
  int lo = hi / 2;  // ci(lo) < confidence (or lo == 0)
  while (lo + 1 < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (ci_probability(target.epsilon, mid, snr) >= target.confidence)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

int min_pilots_closed_form(const CiSpec& target, double snr) {
  if (target.confidence >= 1.0)
    throw std::domain_error("min_pilots_closed_form: confidence target of 1 is unreachable");
  target.validate();
  if (!(snr > 0.0)) throw std::domain_error("min_pilots_closed_form: snr must be positive");
  const double t = erf_inv(target.confidence) / target.epsilon;
  return static_cast<int>(std::max(1.0, std::ceil(2.0 * t * t / snr - 1e-12)));
}

long long pilot_budget(int pilots_per_sample, long long sample_count) {
  if (pilots_per_sample < 1) throw std::domain_error("pilot_budget: pilots_per_sample must be >= 1");
  if (sample_count < 0) throw std::domain_error("pilot_budget: sample_count must be >= 0");
  return static_cast<long long>(pilots_per_sample) * sample_count;
}

bool budget_feasible(long long pilot_total, long long coherence_symbols) {
  return pilot_total < coherence_symbols;
}

}  // namespace faslab
