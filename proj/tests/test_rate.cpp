#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "faslab/rate.hpp"

using namespace faslab;

namespace {

RateConfig base_config() {
  RateConfig config;
  config.bandwidth_hz = 30000.0;
  config.coherence_symbols = 1200;
  config.snr = 10.0;
  return config;
}

}  // namespace

TEST_CASE("perfect-knowledge rate against an independent evaluation") {
  const RateConfig config = base_config();
  const std::complex<double> h{0.6, -0.8};  // |h|^2 = 1
  // log2(1+x) via log1p, a different code path from the implementation. The
  // two paths round 1+x differently, so allow a few hundred ulps of slack.
  const double x = std::norm(h) * config.snr / config.bandwidth_hz;
  const double expected = config.bandwidth_hz * std::log1p(x) / std::numbers::ln2;
  CHECK(rate_perfect(h, config) == doctest::Approx(expected).epsilon(1e-11));
  CHECK(rate_tas(h, config) == doctest::Approx(expected).epsilon(1e-11));
  CHECK(rate_perfect({0.0, 0.0}, config) == 0.0);
  CHECK(rate_perfect({2.0, 0.0}, config) > rate_perfect({1.0, 0.0}, config));
}

TEST_CASE("estimated-knowledge rate: overhead, error penalty, clamp") {
  const RateConfig config = base_config();
  const std::complex<double> h{1.0, 0.0};

  // No pilots, no estimation error: equals the perfect-knowledge rate.
  CHECK(rate_imperfect(h, h, 0, config) == doctest::Approx(rate_perfect(h, config)).epsilon(1e-13));

  // Pure pre-log scaling when the estimate is exact.
  const double scaled = rate_imperfect(h, h, 300, config);
  CHECK(scaled == doctest::Approx((1.0 - 300.0 / 1200.0) * rate_perfect(h, config)).epsilon(1e-13));

  // Estimation error strictly lowers the rate.
  CHECK(rate_imperfect(h, {0.9, 0.1}, 300, config) < scaled);

  // Budget at or above the coherence block leaves no data symbols.
  CHECK(rate_imperfect(h, h, 1200, config) == 0.0);
  CHECK(rate_imperfect(h, h, 5000, config) == 0.0);
  CHECK_THROWS_AS(rate_imperfect(h, h, -1, config), std::domain_error);
}

TEST_CASE("best port scans the whole grid") {
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::two_d, 2.0);
  const DenseGrid grid = DenseGrid::over(box, 0.5, 0.5, 8);
  Eigen::MatrixXcd values = Eigen::MatrixXcd::Constant(grid.rows(), grid.cols(), {0.1, 0.0});
  values(7, 21) = {0.0, 3.0};

  const PortChoice port = best_port(values, grid);
  CHECK(port.row == 7);
  CHECK(port.col == 21);
  CHECK(port.x == doctest::Approx(grid.xs[7]));
  CHECK(port.y == doctest::Approx(grid.ys[21]));
  CHECK(port.value == values(7, 21));
}

TEST_CASE("rate sweep invariants on a small run") {
  RateSweepSpec spec;
  spec.kind = RateSweepKind::pilots_per_sample;
  spec.values = {1, 4, 8};
  spec.width = 2.0;
  spec.nodes_per_sample = 8;
  spec.trials = 12;
  spec.seed = 5;
  spec.rate = base_config();

  const auto points = monte_carlo_rates(spec);
  REQUIRE(points.size() == 3);
  for (const auto& p : points) {
    CHECK(p.width == 2.0);
    CHECK(p.samples_total == 36);
    CHECK(p.pilot_total == 36LL * p.pilots_per_sample);
    CHECK(p.feasible);
    CHECK(p.trials == 12);
    // Port selection over the grid cannot lose to the fixed center port.
    CHECK(p.perfect_mean >= p.tas_mean);
    CHECK(p.perfect_se >= 0.0);
    CHECK(p.imperfect_mean > 0.0);
  }
  // The perfect-knowledge and fixed-port rates do not depend on the pilot count.
  CHECK(points[0].perfect_mean == doctest::Approx(points[2].perfect_mean).epsilon(1e-14));
  CHECK(points[0].tas_mean == doctest::Approx(points[2].tas_mean).epsilon(1e-14));
}

TEST_CASE("rate sweep is deterministic and thread-count independent") {
  RateSweepSpec spec;
  spec.kind = RateSweepKind::aperture_width;
  spec.values = {1.0, 2.0};
  spec.pilots_per_sample = 4;
  spec.nodes_per_sample = 8;
  spec.trials = 10;
  spec.seed = 9;
  spec.rate = base_config();

  const auto a = monte_carlo_rates(spec);
  const auto b = monte_carlo_rates(spec);
  spec.jobs = 3;
  const auto c = monte_carlo_rates(spec);

  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].imperfect_mean == b[i].imperfect_mean);
    CHECK(a[i].imperfect_se == b[i].imperfect_se);
    CHECK(a[i].perfect_mean == b[i].perfect_mean);
    CHECK(a[i].imperfect_mean == c[i].imperfect_mean);
    CHECK(a[i].imperfect_se == c[i].imperfect_se);
    CHECK(a[i].tas_mean == c[i].tas_mean);
  }
}

TEST_CASE("pilot budgets beyond the coherence block are flagged infeasible") {
  RateSweepSpec spec;
  spec.kind = RateSweepKind::aperture_width;
  spec.values = {2.0, 6.0};  // width 6: 14x14 samples * 7 pilots = 1372 > 1200
  spec.pilots_per_sample = 7;
  spec.nodes_per_sample = 8;
  spec.trials = 3;
  spec.seed = 2;
  spec.rate = base_config();

  const auto points = monte_carlo_rates(spec);
  REQUIRE(points.size() == 2);
  CHECK(points[0].feasible);
  CHECK_FALSE(points[1].feasible);
  CHECK(points[1].imperfect_mean == 0.0);
  CHECK(points[1].perfect_mean > 0.0);
}

TEST_CASE("sweep validation") {
  RateSweepSpec spec;
  spec.values = {};
  CHECK_THROWS_AS(monte_carlo_rates(spec), std::invalid_argument);
  spec.values = {2.5};  // pilots sweep needs integer counts
  spec.kind = RateSweepKind::pilots_per_sample;
  CHECK_THROWS_AS(monte_carlo_rates(spec), std::invalid_argument);
}
