#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "faslab/aperture.hpp"

namespace faslab {

// Uniform evaluation grid spanning the closed aperture, nodes_per_sample
// subdivisions per sampling interval per axis (so samples land on nodes when
// side/distance is an integer and nodes_per_sample is even).
struct DenseGrid {
  Dimensionality dim = Dimensionality::two_d;
  Eigen::VectorXd xs, ys;  // ys empty in 1D
  double step_x = 0.0;
  double step_y = 0.0;

  static DenseGrid over(const ApertureSpec& aperture, double distance_x,
                        double distance_y, int nodes_per_sample);

  Eigen::Index rows() const { return xs.size(); }
  Eigen::Index cols() const { return dim == Dimensionality::two_d ? ys.size() : 1; }
};

struct ReconstructedField {
  DenseGrid grid;
  Eigen::MatrixXcd values;  // rows() x cols()
};

// Ideal low-pass interpolation with cutoff pi/distance per axis:
// sum_n v_n * sinc((x - x_n)/Dx) (* sinc((y - y_m)/Dy) in 2D).
// Reference path; cost O(G * N) per axis pair.
ReconstructedField reconstruct(const SampleSet& samples, const DenseGrid& grid);

// Same sums evaluated by zero-padded FFT linear convolution with the sampled
// kernel impulse response; equals the kernel path at the nodes to roundoff.
// Requires every sample to sit on a grid node (throws std::invalid_argument).
ReconstructedField reconstruct_dft(const SampleSet& samples, const DenseGrid& grid);

// Aperture-integrated squared error normalized by the truth energy, both by
// trapezoidal quadrature on the grid. Throws std::domain_error when the truth
// has zero energy.
double nmse(const Eigen::MatrixXcd& approx, const Eigen::MatrixXcd& truth,
            const DenseGrid& grid);

// Discrete power spectral density of grid values. Bin b maps to angular
// wavenumber 2*pi*b/(G*step); power is |step * DFT|^2 (continuous-transform
// scaling). Bins are stored in increasing wavenumber order.
struct PowerSpectrum {
  Eigen::VectorXd wavenumbers_x, wavenumbers_y;  // ys empty in 1D
  Eigen::MatrixXd power;
};

PowerSpectrum power_spectrum(const Eigen::MatrixXcd& values, const DenseGrid& grid);

// Unit-integral impulse approximation of a sample set on a grid: value/step at
// the nearest node, zero elsewhere. Feeding this to power_spectrum shows the
// spectral replicas introduced by sampling.
Eigen::MatrixXcd impulse_train(const SampleSet& samples, const DenseGrid& grid);

// Rows (x[, y], value_re, value_im) for each grid node.
void write_grid_csv(const ReconstructedField& field, std::ostream& out);

}  // namespace faslab
