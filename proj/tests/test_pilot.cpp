#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "faslab/pilot.hpp"
#include "faslab/rng.hpp"

using namespace faslab;

TEST_CASE("pilot amplitudes are unit per rail") {
  const auto a = pilot_amplitudes(3);
  REQUIRE(a.size() == 3);
  for (double v : a) CHECK(v == 1.0);
  CHECK_THROWS(pilot_amplitudes(0));
}

TEST_CASE("estimate is exact without noise") {
  const std::complex<double> h{0.4, -1.1};
  const auto amps = pilot_amplitudes(5);
  std::vector<std::complex<double>> received;
  for (double a : amps) received.push_back(a * h);
  CHECK(std::abs(mle_estimate(received, amps) - h) < 1e-15);
}

TEST_CASE("estimator rejects degenerate inputs") {
  std::vector<std::complex<double>> r(3, {1.0, 0.0});
  std::vector<double> zero_amps(3, 0.0);
  CHECK_THROWS_AS(mle_estimate(r, zero_amps), std::domain_error);
  std::vector<double> two_amps(2, 1.0);
  CHECK_THROWS_AS(mle_estimate(r, two_amps), std::domain_error);
}

TEST_CASE("estimator error statistics follow the pilot law") {
  PilotConfig config;
  config.pilots_per_sample = 7;
  config.snr = 100.0;
  CHECK(estimator_error_std(config) == doctest::Approx(std::sqrt(1.0 / 700.0)).epsilon(1e-14));

  const std::complex<double> h{0.3, -0.7};
  Rng rng(2024);
  const int n = 20000;
  double m_re = 0, m_im = 0, v_re = 0, v_im = 0;
  for (int t = 0; t < n; ++t) {
    const auto err = estimate_channel(h, config, rng) - h;
    m_re += err.real();
    m_im += err.imag();
    v_re += err.real() * err.real();
    v_im += err.imag() * err.imag();
  }
  m_re /= n;
  m_im /= n;
  v_re = v_re / n - m_re * m_re;
  v_im = v_im / n - m_im * m_im;

  const double target = 1.0 / 700.0;
  const double mean_tol = 4.0 * std::sqrt(target / n);
  CHECK(std::abs(m_re) < mean_tol);
  CHECK(std::abs(m_im) < mean_tol);
  CHECK(v_re == doctest::Approx(target).epsilon(0.08));
  CHECK(v_im == doctest::Approx(target).epsilon(0.08));
}

TEST_CASE("confidence formula frozen values") {
  // erf(0.1*sqrt(7*100/2)) and erf(0.1*sqrt(1*100/2)), independent references.
  CHECK(ci_probability(0.1, 7, 100.0) == doctest::Approx(0.991849028406).epsilon(1e-10));
  CHECK(ci_probability(0.1, 1, 100.0) == doctest::Approx(0.682689492137).epsilon(1e-10));
  CHECK(ci_probability(0.1, 16, 100.0) > ci_probability(0.1, 15, 100.0));
}

TEST_CASE("minimum pilot search agrees with the closed form") {
  for (double epsilon : {0.05, 0.1, 0.2})
    for (double snr : {1.0, 10.0, 100.0, 1000.0})
      for (double confidence : {0.9, 0.95, 0.99}) {
        CiSpec target;
        target.epsilon = epsilon;
        target.confidence = confidence;
        const int searched = min_pilots(target, snr);
        CHECK(searched == min_pilots_closed_form(target, snr));
        // Definition check: minimal count meeting the target.
        CHECK(ci_probability(epsilon, searched, snr) >= confidence);
        if (searched > 1) CHECK(ci_probability(epsilon, searched - 1, snr) < confidence);
      }
}

TEST_CASE("minimum pilots frozen value") {
  CiSpec target;  // epsilon 0.1, confidence 0.95
  CHECK(min_pilots(target, 100.0) == 4);
}

TEST_CASE("unreachable confidence is rejected") {
  CiSpec target;
  target.confidence = 1.0;
  CHECK_THROWS(min_pilots(target, 100.0));
}

TEST_CASE("pilot budget accounting") {
  CHECK(pilot_budget(7, 100) == 700);
  CHECK(pilot_budget(1, 0) == 0);
  CHECK(budget_feasible(1199, 1200));
  CHECK_FALSE(budget_feasible(1200, 1200));
  CHECK_FALSE(budget_feasible(1372, 1200));
}

TEST_CASE("config validation") {
  PilotConfig bad_count;
  bad_count.pilots_per_sample = 0;
  CHECK_THROWS_AS(bad_count.validate(), std::invalid_argument);
  PilotConfig bad_snr;
  bad_snr.snr = 0.0;
  CHECK_THROWS_AS(bad_snr.validate(), std::invalid_argument);
  CiSpec bad_eps;
  bad_eps.epsilon = 0.0;
  CHECK_THROWS_AS(bad_eps.validate(), std::invalid_argument);
}
