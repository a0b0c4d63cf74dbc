#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "faslab/field.hpp"
#include "faslab/pilot.hpp"

namespace faslab {

// Closed rectangular observation region centered at the origin, sides in
// wavelengths. In 1D only side_x is meaningful.
struct ApertureSpec {
  Dimensionality dim = Dimensionality::two_d;
  double side_x = 2.0;
  double side_y = 2.0;

  static ApertureSpec symmetric(Dimensionality dim, double side);
  void validate() const;  // throws std::invalid_argument
};

// Indicator of the closed aperture box: 1.0 inside or on the boundary, else 0.0.
double window(const ApertureSpec& aperture, double x, double y = 0.0);

// Spacing capturing the spectral leakage up to sidelobe `lobe_order` >= 0:
// 1 / (2 + (2/side) * (lobe_order + 1)); always strictly below 1/2.
double sampling_distance(double side, int lobe_order);

// floor(side/distance), guarded by one ulp so exact integer ratios do not fall
// to the previous integer (e.g. side 4, distance 0.4 must give 10, not 9).
int sample_count(double side, double distance);

// Centers of the sampling cells: -side/2 + (n + 1/2) * distance.
std::vector<double> sample_positions(double side, double distance);

// Uniformly spaced field observations over an aperture, either exact values
// or per-position pilot-based estimates.
struct SampleSet {
  Dimensionality dim = Dimensionality::two_d;
  double distance_x = 0.0;
  double distance_y = 0.0;
  int lobe_order = -1;  // -1 when the spacing was given directly
  std::vector<double> xs, ys;  // per-axis positions; ys empty in 1D
  Eigen::MatrixXcd values;     // xs.size() x max(1, ys.size())
  Eigen::MatrixXcd truth;      // exact field at the same positions
  bool noisy = false;          // true when values are pilot estimates
};

// Sample a realization over the aperture at the lobe-order spacing (both axes).
// With a PilotConfig, each position is estimated from its own pilot sub-block
// seeded by derive_seed(noise_seed, stream::sample, position index).
SampleSet observe(const FieldRealization& field, const ApertureSpec& aperture,
                  int lobe_order, const std::optional<PilotConfig>& pilots = std::nullopt,
                  std::uint64_t noise_seed = 0);

// Same with an explicit spacing (lobe_order recorded as -1).
SampleSet observe_spacing(const FieldRealization& field, const ApertureSpec& aperture,
                          double distance,
                          const std::optional<PilotConfig>& pilots = std::nullopt,
                          std::uint64_t noise_seed = 0);

// Fully explicit positions; throws std::domain_error when any position falls
// outside the closed aperture.
SampleSet observe_at(const FieldRealization& field, const ApertureSpec& aperture,
                     std::vector<double> xs, std::vector<double> ys, double distance_x,
                     double distance_y, int lobe_order,
                     const std::optional<PilotConfig>& pilots = std::nullopt,
                     std::uint64_t noise_seed = 0);

// Rows (index_x, index_y, x, y, value_re, value_im, truth_re, truth_im, provenance).
void write_samples_csv(const SampleSet& samples, std::ostream& out);

}  // namespace faslab
