#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>

namespace faslab {

enum class Dimensionality { one_d, two_d };

// Electromagnetically-consistent random field over a plane: a plane-wave
// expansion truncated to the propagating disk |k| <= 2*pi/wavelength, with two
// independent quadrature branches that superpose in the observation plane.
// All lengths are measured in wavelengths (the wavelength is normalized to 1).
struct FieldConfig {
  Dimensionality dim = Dimensionality::two_d;
  int length_x = 32;  // spectral period along x, integer number of wavelengths
  int length_y = 32;  // spectral period along y (2D only)

  void validate() const;  // throws std::invalid_argument
};

// Variance of the spectral coefficient for 1D cell l, l in {-L, ..., L-1}:
// (1/pi) * (arcsin((l+1)/L) - arcsin(l/L)) with arguments clamped to [-1, 1].
// Throws std::domain_error outside the index range. Per-branch sum is exactly 1.
double variance_1d(int l, int length);

// Variance of the spectral coefficient for 2D cell (lx, ly), each index in
// {-L, ..., L-1}: integral of 1/(4*pi*sqrt(1-kx^2-ky^2)) over the cell,
// restricted to the unit disk in normalized wavenumber. Cells outside the disk
// are exactly zero. Per-branch total is 1/2. `tol` is the absolute quadrature
// tolerance; non-convergence raises QuadratureError.
double variance_2d(int lx, int ly, int length_x, int length_y, double tol = 1e-10);

// Precomputed spectral index set and per-cell variances for one configuration.
// Expensive in 2D (one quadrature per cell), so shared across realizations.
class SpectralBasis {
 public:
  static std::shared_ptr<const SpectralBasis> make(const FieldConfig& config);

  const FieldConfig& config() const { return config_; }

  // Dense per-index variance tables; index l maps to row/column l + L.
  const Eigen::VectorXd& table_1d() const { return var_1d_; }
  const Eigen::MatrixXd& table_2d() const { return var_2d_; }

  double branch_variance() const { return branch_variance_; }   // sum over one branch
  double total_variance() const { return 2.0 * branch_variance_; }  // = E|h|^2
  int active_cells() const { return active_cells_; }            // cells with positive variance

 private:
  SpectralBasis() = default;

  FieldConfig config_;
  Eigen::VectorXd var_1d_;
  Eigen::MatrixXd var_2d_;
  double branch_variance_ = 0.0;
  int active_cells_ = 0;
};

// One random draw of the spectral coefficients. Coefficients are complex
// normal with the basis variances, independent across cells and branches.
class FieldRealization {
 public:
  FieldRealization(std::shared_ptr<const SpectralBasis> basis, std::uint64_t seed);

  const FieldConfig& config() const { return basis_->config(); }
  const SpectralBasis& basis() const { return *basis_; }
  std::uint64_t seed() const { return seed_; }

  // Per-branch coefficients (branch 0 and 1) and their superposition.
  const Eigen::VectorXcd& branch_1d(int branch) const;
  const Eigen::MatrixXcd& branch_2d(int branch) const;
  const Eigen::VectorXcd& combined_1d() const;
  const Eigen::MatrixXcd& combined_2d() const;

  // Field value h at a point; throws std::domain_error on dimensionality mismatch.
  std::complex<double> evaluate(double x) const;
  std::complex<double> evaluate(double x, double y) const;

  // Vectorized evaluation along a line (1D) or on a tensor grid (2D).
  Eigen::VectorXcd evaluate_line(const Eigen::VectorXd& xs) const;
  Eigen::MatrixXcd evaluate_grid(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) const;

 private:
  std::shared_ptr<const SpectralBasis> basis_;
  std::uint64_t seed_ = 0;
  Eigen::VectorXcd branch_vec_[2];  // 1D
  Eigen::MatrixXcd branch_mat_[2];  // 2D
  Eigen::VectorXcd combined_vec_;
  Eigen::MatrixXcd combined_mat_;
};

FieldRealization draw_realization(const FieldConfig& config, std::uint64_t seed);

// Phase matrix E with E(i, l + L) = exp(j*2*pi*l*x_i/L); the evaluation kernel.
Eigen::MatrixXcd phase_matrix(const Eigen::VectorXd& xs, int length);

// Normalized theoretical spatial autocorrelation c(delta)/c(0) by quadrature
// of the propagating-disk spectral density. Approaches J0(2*pi*delta) for the
// 1D model and sinc(2*delta) for the 2D model; the quadrature shares no code
// with either closed form.
double autocorrelation_oracle(double delta, const FieldConfig& config, double tol = 1e-10);

// One row per (cell, branch): indices, variance, coefficient real/imag.
void write_coefficients_csv(const FieldRealization& field, std::ostream& out);

}  // namespace faslab
