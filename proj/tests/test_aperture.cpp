#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include <doctest.h>

#include "faslab/aperture.hpp"

using namespace faslab;

TEST_CASE("leakage-aware spacings, frozen values") {
  CHECK(sampling_distance(2.0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(sampling_distance(4.0, 0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(sampling_distance(2.0, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(sampling_distance(2.0, 2) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("spacing is strictly below half a wavelength") {
  for (double side : {0.5, 1.0, 2.0, 3.0, 4.0, 7.5, 10.0, 100.0})
    for (int d = 0; d <= 8; ++d) CHECK(sampling_distance(side, d) < 0.5);
  CHECK_THROWS(sampling_distance(0.0, 0));
  CHECK_THROWS(sampling_distance(2.0, -1));
}

TEST_CASE("sample counts survive inexact division") {
  CHECK(sample_count(2.0, 0.5) == 4);
  CHECK(sample_count(2.0, 1.0 / 3.0) == 6);
  // 4/0.4 evaluates to 9.999...; the ulp guard must still give 10.
  CHECK(sample_count(4.0, 0.4) == 10);
  CHECK(sample_count(3.0, sampling_distance(3.0, 0)) == 8);
  CHECK(sample_count(10.0, sampling_distance(10.0, 0)) == 22);
  CHECK(sample_count(2.0, 0.3) == 6);
}

TEST_CASE("sample positions are centered cell midpoints") {
  const auto p = sample_positions(2.0, 0.5);
  REQUIRE(p.size() == 4);
  CHECK(p[0] == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(p[2] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p[3] == doctest::Approx(0.75).epsilon(1e-15));
  for (std::size_t i = 0; i < p.size(); ++i)
    CHECK(p[i] == doctest::Approx(-p[p.size() - 1 - i]).epsilon(1e-12));
}

TEST_CASE("window indicator is closed on the boundary") {
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::two_d, 2.0);
  CHECK(window(box, 0.0, 0.0) == 1.0);
  CHECK(window(box, 1.0, -1.0) == 1.0);
  CHECK(window(box, 1.0000001, 0.0) == 0.0);
  CHECK(window(box, 0.0, -1.1) == 0.0);
  CHECK_THROWS(ApertureSpec::symmetric(Dimensionality::two_d, 0.0).validate());
}

namespace {

FieldRealization make_field(Dimensionality dim, std::uint64_t seed) {
  FieldConfig config;
  config.dim = dim;
  config.length_x = 32;
  config.length_y = 32;
  return FieldRealization(SpectralBasis::make(config), seed);
}

}  // namespace

TEST_CASE("noiseless observation returns exact field values") {
  const auto field = make_field(Dimensionality::two_d, 12);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::two_d, 2.0);
  const SampleSet set = observe(field, box, 0);

  CHECK(set.lobe_order == 0);
  CHECK(set.distance_x == doctest::Approx(1.0 / 3.0));
  CHECK_FALSE(set.noisy);
  REQUIRE(set.xs.size() == 6);
  REQUIRE(set.ys.size() == 6);
  CHECK((set.values - set.truth).cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t i = 0; i < set.xs.size(); ++i)
    for (std::size_t j = 0; j < set.ys.size(); ++j)
      CHECK(std::abs(set.truth(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                     field.evaluate(set.xs[i], set.ys[j])) < 1e-14);
}

TEST_CASE("pilot observation adds bounded noise and is seed-deterministic") {
  const auto field = make_field(Dimensionality::one_d, 21);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::one_d, 4.0);
  PilotConfig pilots;
  pilots.pilots_per_sample = 7;
  pilots.snr = 1e8;

  const SampleSet a = observe(field, box, 0, pilots, 99);
  const SampleSet b = observe(field, box, 0, pilots, 99);
  const SampleSet c = observe(field, box, 0, pilots, 100);

  CHECK(a.noisy);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.values - c.values).cwiseAbs().maxCoeff() > 0.0);
  // At SNR 1e8 each part's error std is sqrt(1/7e8) ~ 3.8e-5; 1e-3 is > 26 sigma.
  CHECK((a.values - a.truth).cwiseAbs().maxCoeff() < 1e-3);
  CHECK((a.values - a.truth).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("explicit spacing and explicit positions") {
  const auto field = make_field(Dimensionality::one_d, 33);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::one_d, 2.0);

  const SampleSet set = observe_spacing(field, box, 0.5);
  CHECK(set.lobe_order == -1);
  CHECK(set.distance_x == 0.5);
  REQUIRE(set.xs.size() == 4);

  CHECK_THROWS_AS(observe_at(field, box, {0.0, 1.25}, {}, 0.5, 0.0, -1), std::domain_error);
}

TEST_CASE("dimensionality mismatches are rejected") {
  const auto field = make_field(Dimensionality::one_d, 3);
  const ApertureSpec box2 = ApertureSpec::symmetric(Dimensionality::two_d, 2.0);
  CHECK_THROWS_AS(observe(field, box2, 0), std::domain_error);
}

TEST_CASE("sample CSV carries provenance") {
  const auto field = make_field(Dimensionality::one_d, 8);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::one_d, 2.0);

  std::ostringstream clean;
  write_samples_csv(observe(field, box, 0), clean);
  CHECK(clean.str().find("noiseless") != std::string::npos);
  CHECK(clean.str().find("mle") == std::string::npos);

  PilotConfig pilots;
  std::ostringstream noisy;
  write_samples_csv(observe(field, box, 0, pilots, 1), noisy);
  CHECK(noisy.str().find("mle") != std::string::npos);

  // Header plus one row per position.
  const std::string text = clean.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 6);
}
