#include "faslab/aperture.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "format.hpp"

namespace faslab {

ApertureSpec ApertureSpec::symmetric(Dimensionality dim, double side) {
  ApertureSpec spec;
  spec.dim = dim;
  spec.side_x = side;
  spec.side_y = dim == Dimensionality::two_d ? side : 0.0;
  spec.validate();
  return spec;
}

void ApertureSpec::validate() const {
  if (!(side_x > 0.0)) throw std::invalid_argument("ApertureSpec: side_x must be positive");
  if (dim == Dimensionality::two_d && !(side_y > 0.0))
    throw std::invalid_argument("ApertureSpec: side_y must be positive");
}

double window(const ApertureSpec& aperture, double x, double y) {
  aperture.validate();
  const double hx = 0.5 * aperture.side_x;
  if (x < -hx || x > hx) return 0.0;
  if (aperture.dim == Dimensionality::two_d) {
    const double hy = 0.5 * aperture.side_y;
    if (y < -hy || y > hy) return 0.0;
  }
  return 1.0;
}

double sampling_distance(double side, int lobe_order) {
  if (!(side > 0.0)) throw std::domain_error("sampling_distance: side must be positive");
  if (lobe_order < 0) throw std::domain_error("sampling_distance: lobe_order must be >= 0");
  return 1.0 / (2.0 + (2.0 / side) * (lobe_order + 1));
}

int sample_count(double side, double distance) {
  if (!(side > 0.0)) throw std::domain_error("sample_count: side must be positive");
  if (!(distance > 0.0)) throw std::domain_error("sample_count: distance must be positive");
  const double ratio = side / distance;
  // One-ulp guard: exact integer ratios otherwise land just below the integer.
  return static_cast<int>(std::floor(ratio * (1.0 + 1e-12) + 1e-12));
}

std::vector<double> sample_positions(double side, double distance) {
  const int n = sample_count(side, distance);
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = -0.5 * side + (i + 0.5) * distance;
  return xs;
}

namespace {

SampleSet observe_impl(const FieldRealization& field, const ApertureSpec& aperture,
                       std::vector<double> xs, std::vector<double> ys, double distance_x,
                       double distance_y, int lobe_order,
                       const std::optional<PilotConfig>& pilots, std::uint64_t noise_seed,
                       bool check_containment) {
  aperture.validate();
  if (field.config().dim != aperture.dim)
    throw std::domain_error("observe: field/aperture dimensionality mismatch");
  if (pilots) pilots->validate();

  if (check_containment) {
    for (double x : xs)
      if (window(aperture, x, 0.0) == 0.0)
        throw std::domain_error("observe: sample position outside the aperture");
    for (double y : ys)
      if (window(aperture, 0.0, y) == 0.0)
        throw std::domain_error("observe: sample position outside the aperture");
  }

  SampleSet set;
  set.dim = aperture.dim;
  set.distance_x = distance_x;
  set.distance_y = distance_y;
  set.lobe_order = lobe_order;
  set.xs = std::move(xs);
  set.ys = std::move(ys);
  set.noisy = pilots.has_value();

  const Eigen::Index nx = static_cast<Eigen::Index>(set.xs.size());
  const Eigen::Index ny =
      set.dim == Dimensionality::two_d ? static_cast<Eigen::Index>(set.ys.size()) : 1;
  if (nx == 0 || ny == 0) throw std::domain_error("observe: empty sample grid");

  const Eigen::VectorXd ex = Eigen::Map<const Eigen::VectorXd>(set.xs.data(), nx);
  if (set.dim == Dimensionality::one_d) {
    set.truth = field.evaluate_line(ex);
  } else {
    const Eigen::VectorXd ey = Eigen::Map<const Eigen::VectorXd>(set.ys.data(), ny);
    set.truth = field.evaluate_grid(ex, ey);
  }

  set.values = set.truth;
  if (pilots) {
    // Independent pilot sub-block per position, seeded by the flat index so the
    // result is order- and thread-agnostic.
    for (Eigen::Index i = 0; i < nx; ++i) {
      for (Eigen::Index j = 0; j < ny; ++j) {
        Rng rng(derive_seed(noise_seed, stream::sample,
                            static_cast<std::uint64_t>(i * ny + j)));
        set.values(i, j) = estimate_channel(set.truth(i, j), *pilots, rng);
      }
    }
  }
  return set;
}

}  // namespace

SampleSet observe(const FieldRealization& field, const ApertureSpec& aperture, int lobe_order,
                  const std::optional<PilotConfig>& pilots, std::uint64_t noise_seed) {
  const double dx = sampling_distance(aperture.side_x, lobe_order);
  std::vector<double> xs = sample_positions(aperture.side_x, dx);
  double dy = 0.0;
  std::vector<double> ys;
  if (aperture.dim == Dimensionality::two_d) {
    dy = sampling_distance(aperture.side_y, lobe_order);
    ys = sample_positions(aperture.side_y, dy);
  }
  return observe_impl(field, aperture, std::move(xs), std::move(ys), dx, dy, lobe_order,
                      pilots, noise_seed, false);
}

SampleSet observe_spacing(const FieldRealization& field, const ApertureSpec& aperture,
                          double distance, const std::optional<PilotConfig>& pilots,
                          std::uint64_t noise_seed) {
  if (!(distance > 0.0)) throw std::domain_error("observe_spacing: distance must be positive");
  std::vector<double> xs = sample_positions(aperture.side_x, distance);
  double dy = 0.0;
  std::vector<double> ys;
  if (aperture.dim == Dimensionality::two_d) {
    dy = distance;
    ys = sample_positions(aperture.side_y, distance);
  }
  return observe_impl(field, aperture, std::move(xs), std::move(ys), distance, dy, -1, pilots,
                      noise_seed, false);
}

SampleSet observe_at(const FieldRealization& field, const ApertureSpec& aperture,
                     std::vector<double> xs, std::vector<double> ys, double distance_x,
                     double distance_y, int lobe_order,
                     const std::optional<PilotConfig>& pilots, std::uint64_t noise_seed) {
  return observe_impl(field, aperture, std::move(xs), std::move(ys), distance_x, distance_y,
                      lobe_order, pilots, noise_seed, true);
}

void write_samples_csv(const SampleSet& samples, std::ostream& out) {
  using detail::fmt;
  out << "index_x,index_y,x,y,value_re,value_im,truth_re,truth_im,provenance\n";
  const char* provenance = samples.noisy ? "mle" : "noiseless";
  const Eigen::Index ny = samples.values.cols();
  for (Eigen::Index i = 0; i < samples.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < ny; ++j) {
      const double y = samples.dim == Dimensionality::two_d ? samples.ys[static_cast<std::size_t>(j)] : 0.0;
      out << i << ',' << j << ',' << fmt(samples.xs[static_cast<std::size_t>(i)]) << ','
          << fmt(y) << ',' << fmt(samples.values(i, j).real()) << ','
          << fmt(samples.values(i, j).imag()) << ',' << fmt(samples.truth(i, j).real()) << ','
          << fmt(samples.truth(i, j).imag()) << ',' << provenance << '\n';
    }
  }
}

}  // namespace faslab
