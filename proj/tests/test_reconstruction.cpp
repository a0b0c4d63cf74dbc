#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "faslab/reconstruction.hpp"
#include "faslab/rng.hpp"

using namespace faslab;

namespace {

FieldRealization make_field(Dimensionality dim, std::uint64_t seed) {
  FieldConfig config;
  config.dim = dim;
  config.length_x = 32;
  config.length_y = 32;
  return FieldRealization(SpectralBasis::make(config), seed);
}

double rel_gap(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("dense grid spans the closed aperture") {
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::two_d, 2.0);
  const DenseGrid grid = DenseGrid::over(box, 0.5, 0.5, 8);
  REQUIRE(grid.xs.size() == 33);
  REQUIRE(grid.ys.size() == 33);
  CHECK(grid.xs[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(grid.xs[32] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(grid.step_x == doctest::Approx(2.0 / 32.0).epsilon(1e-15));
  CHECK_THROWS_AS(DenseGrid::over(box, 0.5, 0.5, 4), std::invalid_argument);
}

TEST_CASE("kernel interpolation is exact at the sample positions") {
  const auto field = make_field(Dimensionality::one_d, 4);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::one_d, 2.0);
  const SampleSet set = observe(field, box, 0);
  const DenseGrid grid = DenseGrid::over(box, set.distance_x, 0.0, 16);
  const ReconstructedField rec = reconstruct(set, grid);

  // Even nodes-per-sample puts every sample on a grid node, where all other
  // kernel terms vanish.
  for (std::size_t n = 0; n < set.xs.size(); ++n) {
    Eigen::Index g = 0;
    (grid.xs.array() - set.xs[n]).abs().minCoeff(&g);
    CHECK(std::abs(rec.values(g, 0) - set.values(static_cast<Eigen::Index>(n), 0)) < 1e-12);
  }
}

TEST_CASE("kernel and DFT paths agree in 1D") {
  const auto field = make_field(Dimensionality::one_d, 91);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::one_d, 3.2);
  const SampleSet set = observe_spacing(field, box, 0.4);
  REQUIRE(set.xs.size() == 8);
  const DenseGrid grid = DenseGrid::over(box, 0.4, 0.0, 16);

  const ReconstructedField a = reconstruct(set, grid);
  const ReconstructedField b = reconstruct_dft(set, grid);
  CHECK(rel_gap(b.values, a.values) < 1e-9);
}

TEST_CASE("kernel and DFT paths agree in 2D") {
  const auto field = make_field(Dimensionality::two_d, 92);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::two_d, 2.0);
  const SampleSet set = observe_spacing(field, box, 0.5);
  const DenseGrid grid = DenseGrid::over(box, 0.5, 0.5, 8);

  const ReconstructedField a = reconstruct(set, grid);
  const ReconstructedField b = reconstruct_dft(set, grid);
  CHECK(rel_gap(b.values, a.values) < 1e-9);
}

TEST_CASE("DFT path requires node-aligned samples") {
  const auto field = make_field(Dimensionality::one_d, 14);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::one_d, 2.0);
  const SampleSet set = observe_spacing(field, box, 0.3);
  const DenseGrid grid = DenseGrid::over(box, 0.3, 0.0, 8);
  CHECK_THROWS_AS(reconstruct_dft(set, grid), std::invalid_argument);
  CHECK_NOTHROW(reconstruct(set, grid));
}

TEST_CASE("nmse basics") {
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::one_d, 2.0);
  const DenseGrid grid = DenseGrid::over(box, 0.5, 0.0, 8);
  Eigen::MatrixXcd truth = Eigen::MatrixXcd::Constant(grid.rows(), 1, {1.0, 0.0});

  CHECK(nmse(truth, truth, grid) == 0.0);
  CHECK(nmse(2.0 * truth, truth, grid) == doctest::Approx(1.0).epsilon(1e-12));
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(grid.rows(), 1);
  CHECK_THROWS_AS(nmse(truth, zero, grid), std::domain_error);
  CHECK_THROWS_AS(nmse(truth, truth.topRows(3), grid), std::domain_error);
}

TEST_CASE("power spectrum concentrates a grid-periodic tone in one bin") {
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::one_d, 2.0);
  const DenseGrid grid = DenseGrid::over(box, 0.5, 0.0, 16);
  const Eigen::Index g = grid.rows();

  const int bin = 5;  // cycles across the grid span
  const double k = 2.0 * std::numbers::pi * bin / (static_cast<double>(g) * grid.step_x);
  Eigen::MatrixXcd tone(g, 1);
  for (Eigen::Index i = 0; i < g; ++i) tone(i, 0) = std::polar(1.0, k * grid.xs[i]);

  const PowerSpectrum ps = power_spectrum(tone, grid);
  REQUIRE(ps.wavenumbers_x.size() == g);
  // Wavenumber axis is increasing and roughly symmetric.
  for (Eigen::Index i = 1; i < g; ++i) CHECK(ps.wavenumbers_x[i] > ps.wavenumbers_x[i - 1]);

  Eigen::Index peak_row = 0, peak_col = 0;
  const double peak = ps.power.maxCoeff(&peak_row, &peak_col);
  CHECK(ps.wavenumbers_x[peak_row] == doctest::Approx(k).epsilon(1e-12));
  CHECK(peak / ps.power.sum() > 0.999);
}

TEST_CASE("impulse train integrates to the sample sum") {
  const auto field = make_field(Dimensionality::one_d, 55);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::one_d, 2.0);
  const SampleSet set = observe_spacing(field, box, 0.5);
  const DenseGrid grid = DenseGrid::over(box, 0.5, 0.0, 8);

  const Eigen::MatrixXcd train = impulse_train(set, grid);
  const std::complex<double> integral = train.sum() * grid.step_x;
  CHECK(std::abs(integral - set.values.sum()) < 1e-12);
  // Non-zero only at one node per sample.
  int nonzero = 0;
  for (Eigen::Index i = 0; i < train.rows(); ++i)
    if (std::abs(train(i, 0)) > 0.0) ++nonzero;
  CHECK(nonzero == static_cast<int>(set.xs.size()));
}

TEST_CASE("windowing leaks energy outside the propagating disk") {
  const auto field = make_field(Dimensionality::two_d, 6);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::two_d, 2.0);
  const DenseGrid grid = DenseGrid::over(box, 0.5, 0.5, 8);
  const Eigen::MatrixXcd truth = field.evaluate_grid(grid.xs, grid.ys);
  const PowerSpectrum ps = power_spectrum(truth, grid);

  const double kappa = 2.0 * std::numbers::pi;
  double inside = 0.0, outside = 0.0;
  for (Eigen::Index r = 0; r < ps.power.rows(); ++r)
    for (Eigen::Index c = 0; c < ps.power.cols(); ++c) {
      const double k2 = ps.wavenumbers_x[r] * ps.wavenumbers_x[r] +
                        ps.wavenumbers_y[c] * ps.wavenumbers_y[c];
      (k2 <= kappa * kappa ? inside : outside) += ps.power(r, c);
    }
  // The windowed field is not band-limited; a visible fraction must leak.
  CHECK(outside / (inside + outside) > 0.001);
}

TEST_CASE("half-wavelength sampling leaves an error floor that oversampling removes") {
  FieldConfig config;
  config.dim = Dimensionality::one_d;
  config.length_x = 32;
  const auto basis = SpectralBasis::make(config);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::one_d, 2.0);
  const double tight = sampling_distance(2.0, 2);

  double half_sum = 0.0, tight_sum = 0.0;
  for (int t = 0; t < 50; ++t) {
    const FieldRealization field(basis, derive_seed(777, stream::field, t));
    for (double distance : {0.5, tight}) {
      const SampleSet set = observe_spacing(field, box, distance);
      const DenseGrid grid = DenseGrid::over(box, distance, 0.0, 32);
      const Eigen::MatrixXcd truth = field.evaluate_line(grid.xs);
      const double v = nmse(reconstruct(set, grid).values, truth, grid);
      (distance == 0.5 ? half_sum : tight_sum) += v;
    }
  }
  CHECK(half_sum / tight_sum > 5.0);
}

TEST_CASE("reconstruction error concentrates near the aperture walls") {
  FieldConfig config;
  config.dim = Dimensionality::two_d;
  config.length_x = 32;
  config.length_y = 32;
  const auto basis = SpectralBasis::make(config);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::two_d, 2.0);
  const double distance = sampling_distance(2.0, 0);
  const DenseGrid grid = DenseGrid::over(box, distance, distance, 16);

  std::vector<double> ratios;
  for (int t = 0; t < 9; ++t) {
    const FieldRealization field(basis, derive_seed(4242, stream::field, t));
    const SampleSet set = observe_spacing(field, box, distance);
    const Eigen::MatrixXcd truth = field.evaluate_grid(grid.xs, grid.ys);
    const Eigen::MatrixXcd err = reconstruct(set, grid).values - truth;

    double edge = 0.0, core = 0.0;
    int edge_n = 0, core_n = 0;
    for (Eigen::Index i = 0; i < grid.rows(); ++i)
      for (Eigen::Index j = 0; j < grid.cols(); ++j) {
        const double margin = 1.0 - std::max(std::abs(grid.xs[i]), std::abs(grid.ys[j]));
        if (margin < 0.25) {
          edge += std::norm(err(i, j));
          ++edge_n;
        } else if (margin > 0.5) {
          core += std::norm(err(i, j));
          ++core_n;
        }
      }
    ratios.push_back((edge / edge_n) / (core / core_n));
  }
  std::sort(ratios.begin(), ratios.end());
  CHECK(ratios[ratios.size() / 2] > 1.0);
}
