#include "faslab/reconstruction.hpp"

#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "faslab/fft.hpp"
#include "faslab/numerics.hpp"
#include "format.hpp"

namespace faslab {

namespace {

void check_uniform(const std::vector<double>& xs, double distance, const char* axis) {
  if (!(distance > 0.0)) throw std::domain_error("reconstruct: sampling distance must be positive");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (std::abs(xs[i + 1] - xs[i] - distance) > 1e-9)
      throw std::domain_error(std::string("reconstruct: nonuniform sample spacing along ") + axis);
}

Eigen::MatrixXd kernel_matrix(const Eigen::VectorXd& grid, const std::vector<double>& samples,
                              double distance) {
  Eigen::MatrixXd k(grid.size(), static_cast<Eigen::Index>(samples.size()));
  for (Eigen::Index g = 0; g < grid.size(); ++g)
    for (std::size_t n = 0; n < samples.size(); ++n)
      k(g, static_cast<Eigen::Index>(n)) =
          sinc_pi((grid[g] - samples[n]) / distance);
  return k;
}

// Node index of each sample; the DFT path requires exact grid alignment.
std::vector<std::size_t> node_indices(const Eigen::VectorXd& grid, double step,
                                      const std::vector<double>& samples) {
  std::vector<std::size_t> idx(samples.size());
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const double pos = (samples[n] - grid[0]) / step;
    const auto nearest = static_cast<long long>(std::llround(pos));
    if (nearest < 0 || nearest >= grid.size() ||
        std::abs(grid[nearest] - samples[n]) > 1e-9)
      throw std::invalid_argument(
          "reconstruct_dft: sample positions must coincide with grid nodes");
    idx[n] = static_cast<std::size_t>(nearest);
  }
  return idx;
}

// Frequency response of the interpolation kernel sampled on the grid,
// zero-padded for exact linear convolution over all node offsets.
std::vector<std::complex<double>> kernel_spectrum(Eigen::Index nodes, double step,
                                                  double distance, std::size_t padded) {
  std::vector<std::complex<double>> f(padded, {0.0, 0.0});
  const auto g = static_cast<long long>(nodes);
  for (long long j = -(g - 1); j <= g - 1; ++j) {
    const std::size_t slot = static_cast<std::size_t>((j + static_cast<long long>(padded)) %
                                                      static_cast<long long>(padded));
    f[slot] = sinc_pi(static_cast<double>(j) * step / distance) / distance;
  }
  fft_pow2(f, false);
  return f;
}

// r[g] = distance * sum_n v[n] * kernel((g - idx[n]) * step / distance).
void convolve_line(const std::vector<std::size_t>& idx,
                   const Eigen::VectorXcd& values,
                   const std::vector<std::complex<double>>& kernel_freq, double distance,
                   Eigen::Index nodes, std::vector<std::complex<double>>& work,
                   Eigen::VectorXcd& out) {
  const std::size_t padded = kernel_freq.size();
  work.assign(padded, {0.0, 0.0});
  for (std::size_t n = 0; n < idx.size(); ++n) work[idx[n]] = values(static_cast<Eigen::Index>(n));
  fft_pow2(work, false);
  for (std::size_t p = 0; p < padded; ++p) work[p] *= kernel_freq[p];
  fft_pow2(work, true);
  out.resize(nodes);
  for (Eigen::Index g = 0; g < nodes; ++g) out[g] = distance * work[static_cast<std::size_t>(g)];
}

}  // namespace

DenseGrid DenseGrid::over(const ApertureSpec& aperture, double distance_x, double distance_y,
                          int nodes_per_sample) {
  aperture.validate();
  if (nodes_per_sample < 8)
    throw std::invalid_argument("DenseGrid: need at least 8 nodes per sampling interval");

  DenseGrid grid;
  grid.dim = aperture.dim;

  const int nx = sample_count(aperture.side_x, distance_x);
  const Eigen::Index gx = static_cast<Eigen::Index>(nodes_per_sample) * nx + 1;
  grid.xs = Eigen::VectorXd::LinSpaced(gx, -0.5 * aperture.side_x, 0.5 * aperture.side_x);
  grid.step_x = aperture.side_x / static_cast<double>(gx - 1);

  if (aperture.dim == Dimensionality::two_d) {
    const int ny = sample_count(aperture.side_y, distance_y);
    const Eigen::Index gy = static_cast<Eigen::Index>(nodes_per_sample) * ny + 1;
    grid.ys = Eigen::VectorXd::LinSpaced(gy, -0.5 * aperture.side_y, 0.5 * aperture.side_y);
    grid.step_y = aperture.side_y / static_cast<double>(gy - 1);
  }
  return grid;
}

ReconstructedField reconstruct(const SampleSet& samples, const DenseGrid& grid) {
  if (samples.dim != grid.dim) throw std::domain_error("reconstruct: dimensionality mismatch");
  check_uniform(samples.xs, samples.distance_x, "x");

  ReconstructedField result;
  result.grid = grid;
  const Eigen::MatrixXd bx = kernel_matrix(grid.xs, samples.xs, samples.distance_x);
  if (samples.dim == Dimensionality::one_d) {
    result.values = bx * samples.values.col(0);
    return result;
  }
  check_uniform(samples.ys, samples.distance_y, "y");
  const Eigen::MatrixXd by = kernel_matrix(grid.ys, samples.ys, samples.distance_y);
  result.values = bx * samples.values * by.transpose();
  return result;
}

ReconstructedField reconstruct_dft(const SampleSet& samples, const DenseGrid& grid) {
  if (samples.dim != grid.dim) throw std::domain_error("reconstruct_dft: dimensionality mismatch");
  check_uniform(samples.xs, samples.distance_x, "x");

  const Eigen::Index gx = grid.xs.size();
  const std::size_t px = next_pow2(static_cast<std::size_t>(4 * gx));
  const auto idx_x = node_indices(grid.xs, grid.step_x, samples.xs);
  const auto fx = kernel_spectrum(gx, grid.step_x, samples.distance_x, px);

  ReconstructedField result;
  result.grid = grid;
  std::vector<std::complex<double>> work;
  Eigen::VectorXcd line;

  if (samples.dim == Dimensionality::one_d) {
    convolve_line(idx_x, samples.values.col(0), fx, samples.distance_x, gx, work, line);
    result.values = line;
    return result;
  }

  check_uniform(samples.ys, samples.distance_y, "y");
  const Eigen::Index gy = grid.ys.size();
  const std::size_t py = next_pow2(static_cast<std::size_t>(4 * gy));
  const auto idx_y = node_indices(grid.ys, grid.step_y, samples.ys);
  const auto fy = kernel_spectrum(gy, grid.step_y, samples.distance_y, py);

  // Separable kernel: interpolate along x for each sample column, then along y
  // for each grid row.
  Eigen::MatrixXcd mid(gx, samples.values.cols());
  for (Eigen::Index j = 0; j < samples.values.cols(); ++j) {
    convolve_line(idx_x, samples.values.col(j), fx, samples.distance_x, gx, work, line);
    mid.col(j) = line;
  }
  result.values.resize(gx, gy);
  for (Eigen::Index g = 0; g < gx; ++g) {
    Eigen::VectorXcd row = mid.row(g).transpose();
    convolve_line(idx_y, row, fy, samples.distance_y, gy, work, line);
    result.values.row(g) = line.transpose();
  }
  return result;
}

namespace {

Eigen::VectorXd trapezoid_weights(Eigen::Index n, double step) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, step);
  w[0] *= 0.5;
  w[n - 1] *= 0.5;
  return w;
}

}  // namespace

double nmse(const Eigen::MatrixXcd& approx, const Eigen::MatrixXcd& truth,
            const DenseGrid& grid) {
  if (approx.rows() != truth.rows() || approx.cols() != truth.cols())
    throw std::domain_error("nmse: shape mismatch");
  if (approx.rows() != grid.rows() || approx.cols() != grid.cols())
    throw std::domain_error("nmse: values do not match the grid");

  const Eigen::VectorXd wx = trapezoid_weights(grid.xs.size(), grid.step_x);
  double num = 0.0;
  double den = 0.0;
  if (grid.dim == Dimensionality::one_d) {
    num = (wx.array() * (approx - truth).col(0).array().abs2()).sum();
    den = (wx.array() * truth.col(0).array().abs2()).sum();
  } else {
    const Eigen::VectorXd wy = trapezoid_weights(grid.ys.size(), grid.step_y);
    num = (wx.asDiagonal() * (approx - truth).cwiseAbs2() * wy.asDiagonal()).sum();
    den = (wx.asDiagonal() * truth.cwiseAbs2() * wy.asDiagonal()).sum();
  }
  if (den == 0.0) throw std::domain_error("nmse: truth field has zero energy");
  return num / den;
}

namespace {

// Centered DFT bins: b in [-floor(G/2), ceil(G/2)-1].
Eigen::MatrixXcd dft_matrix(Eigen::Index n) {
  Eigen::MatrixXcd w(n, n);
  const double base = -2.0 * std::numbers::pi / static_cast<double>(n);
  const Eigen::Index b0 = -(n / 2);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index g = 0; g < n; ++g)
      w(r, g) = std::polar(1.0, base * static_cast<double>((b0 + r) * g));
  return w;
}

Eigen::VectorXd bin_wavenumbers(Eigen::Index n, double step) {
  Eigen::VectorXd k(n);
  const Eigen::Index b0 = -(n / 2);
  const double scale = 2.0 * std::numbers::pi / (static_cast<double>(n) * step);
  for (Eigen::Index r = 0; r < n; ++r) k[r] = scale * static_cast<double>(b0 + r);
  return k;
}

}  // namespace

PowerSpectrum power_spectrum(const Eigen::MatrixXcd& values, const DenseGrid& grid) {
  if (values.rows() != grid.rows() || values.cols() != grid.cols())
    throw std::domain_error("power_spectrum: values do not match the grid");

  PowerSpectrum ps;
  const Eigen::Index gx = grid.xs.size();
  ps.wavenumbers_x = bin_wavenumbers(gx, grid.step_x);
  const Eigen::MatrixXcd wx = dft_matrix(gx);

  if (grid.dim == Dimensionality::one_d) {
    ps.power = (wx * values.col(0) * grid.step_x).cwiseAbs2();
    return ps;
  }
  const Eigen::Index gy = grid.ys.size();
  ps.wavenumbers_y = bin_wavenumbers(gy, grid.step_y);
  const Eigen::MatrixXcd wy = dft_matrix(gy);
  ps.power = (wx * values * wy.transpose() * (grid.step_x * grid.step_y)).cwiseAbs2();
  return ps;
}

Eigen::MatrixXcd impulse_train(const SampleSet& samples, const DenseGrid& grid) {
  if (samples.dim != grid.dim) throw std::domain_error("impulse_train: dimensionality mismatch");
  Eigen::MatrixXcd train = Eigen::MatrixXcd::Zero(grid.rows(), grid.cols());
  const auto idx_x = node_indices(grid.xs, grid.step_x, samples.xs);
  const double scale_x = 1.0 / grid.step_x;
  if (grid.dim == Dimensionality::one_d) {
    for (std::size_t n = 0; n < idx_x.size(); ++n)
      train(static_cast<Eigen::Index>(idx_x[n]), 0) = samples.values(static_cast<Eigen::Index>(n), 0) * scale_x;
    return train;
  }
  const auto idx_y = node_indices(grid.ys, grid.step_y, samples.ys);
  const double scale = scale_x / grid.step_y;
  for (std::size_t i = 0; i < idx_x.size(); ++i)
    for (std::size_t j = 0; j < idx_y.size(); ++j)
      train(static_cast<Eigen::Index>(idx_x[i]), static_cast<Eigen::Index>(idx_y[j])) =
          samples.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * scale;
  return train;
}

void write_grid_csv(const ReconstructedField& field, std::ostream& out) {
  using detail::fmt;
  if (field.grid.dim == Dimensionality::one_d) {
    out << "x,value_re,value_im\n";
    for (Eigen::Index g = 0; g < field.grid.xs.size(); ++g)
      out << fmt(field.grid.xs[g]) << ',' << fmt(field.values(g, 0).real()) << ','
          << fmt(field.values(g, 0).imag()) << '\n';
    return;
  }
  out << "x,y,value_re,value_im\n";
  for (Eigen::Index g = 0; g < field.grid.xs.size(); ++g)
    for (Eigen::Index h = 0; h < field.grid.ys.size(); ++h)
      out << fmt(field.grid.xs[g]) << ',' << fmt(field.grid.ys[h]) << ','
          << fmt(field.values(g, h).real()) << ',' << fmt(field.values(g, h).imag()) << '\n';
}

}  // namespace faslab
