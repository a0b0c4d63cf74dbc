#include "faslab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "faslab/numerics.hpp"
#include "faslab/rng.hpp"
#include "format.hpp"

namespace faslab {

namespace {

constexpr double kPi = std::numbers::pi;

double clamped_asin(double v) { return std::asin(std::clamp(v, -1.0, 1.0)); }

// Chord length of the unit disk above ky in [lo, hi] at abscissa u, expressed
// as the exact arcsin antiderivative of 1/sqrt(1 - u^2 - ky^2).
double disk_chord_integral(double u, double ky_lo, double ky_hi) {
  const double a2 = 1.0 - u * u;
  if (a2 <= 0.0) return 0.0;
  const double a = std::sqrt(a2);
  const double hi = std::min(ky_hi, a);
  const double lo = std::max(ky_lo, -a);
  if (hi <= lo) return 0.0;
  return clamped_asin(hi / a) - clamped_asin(lo / a);
}

}  // namespace

void FieldConfig::validate() const {
  if (length_x < 1) throw std::invalid_argument("FieldConfig: length_x must be a positive integer");
  if (dim == Dimensionality::two_d && length_y < 1)
    throw std::invalid_argument("FieldConfig: length_y must be a positive integer");
}

double variance_1d(int l, int length) {
  if (length < 1) throw std::domain_error("variance_1d: length must be positive");
  if (l < -length || l >= length)
    throw std::domain_error("variance_1d: index outside {-L, ..., L-1}");
  const double lo = static_cast<double>(l) / length;
  const double hi = static_cast<double>(l + 1) / length;
  return (clamped_asin(hi) - clamped_asin(lo)) / kPi;
}

double variance_2d(int lx, int ly, int length_x, int length_y, double tol) {
  if (length_x < 1 || length_y < 1)
    throw std::domain_error("variance_2d: lengths must be positive");
  if (lx < -length_x || lx >= length_x || ly < -length_y || ly >= length_y)
    throw std::domain_error("variance_2d: index outside {-L, ..., L-1}");

  const double kx0 = static_cast<double>(lx) / length_x;
  const double kx1 = static_cast<double>(lx + 1) / length_x;
  const double ky0 = static_cast<double>(ly) / length_y;
  const double ky1 = static_cast<double>(ly + 1) / length_y;

  const double lo = std::max(kx0, -1.0);
  const double hi = std::min(kx1, 1.0);
  if (lo >= hi) return 0.0;

  // The ky-direction is integrated exactly; the remaining 1D integrand has
  // kinks only where the disk chord meets the cell's ky edges. Split there.
  std::vector<double> cuts{lo, hi};
  for (double edge : {std::abs(ky0), std::abs(ky1)}) {
    if (edge >= 1.0) continue;
    const double r = std::sqrt(1.0 - edge * edge);
    for (double c : {r, -r})
      if (c > lo && c < hi) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double span = cuts[i + 1] - cuts[i];
    if (span <= 0.0) continue;
    total += adaptive_simpson([&](double u) { return disk_chord_integral(u, ky0, ky1); },
                              cuts[i], cuts[i + 1], tol * span / (hi - lo));
  }
  return total / (4.0 * kPi);
}

std::shared_ptr<const SpectralBasis> SpectralBasis::make(const FieldConfig& config) {
  config.validate();
  auto basis = std::shared_ptr<SpectralBasis>(new SpectralBasis());
  basis->config_ = config;

  if (config.dim == Dimensionality::one_d) {
    const int L = config.length_x;
    basis->var_1d_.resize(2 * L);
    for (int l = -L; l < L; ++l) basis->var_1d_[l + L] = variance_1d(l, L);
    basis->branch_variance_ = basis->var_1d_.sum();
    basis->active_cells_ = static_cast<int>((basis->var_1d_.array() > 0.0).count());
    return basis;
  }

  const int Lx = config.length_x;
  const int Ly = config.length_y;
  basis->var_2d_.setZero(2 * Lx, 2 * Ly);
  // The integrand is even in each axis, so cell (l, m) mirrors to (-1-l, m)
  // and (l, -1-m); one quadrant determines the table.
  for (int lx = 0; lx < Lx; ++lx) {
    for (int ly = 0; ly < Ly; ++ly) {
      const double v = variance_2d(lx, ly, Lx, Ly);
      basis->var_2d_(Lx + lx, Ly + ly) = v;
      basis->var_2d_(Lx - 1 - lx, Ly + ly) = v;
      basis->var_2d_(Lx + lx, Ly - 1 - ly) = v;
      basis->var_2d_(Lx - 1 - lx, Ly - 1 - ly) = v;
    }
  }
  basis->branch_variance_ = basis->var_2d_.sum();
  basis->active_cells_ = static_cast<int>((basis->var_2d_.array() > 0.0).count());
  return basis;
}

FieldRealization::FieldRealization(std::shared_ptr<const SpectralBasis> basis,
                                   std::uint64_t seed)
    : basis_(std::move(basis)), seed_(seed) {
  Rng rng(derive_seed(seed_, stream::field));
  const FieldConfig& cfg = basis_->config();

  if (cfg.dim == Dimensionality::one_d) {
    const Eigen::VectorXd& var = basis_->table_1d();
    const Eigen::Index n = var.size();
    for (auto& b : branch_vec_) b.setZero(n);
    for (auto& b : branch_vec_)
      for (Eigen::Index i = 0; i < n; ++i)
        if (var[i] > 0.0) b[i] = std::sqrt(0.5 * var[i]) * rng.normal_complex();
    combined_vec_ = branch_vec_[0] + branch_vec_[1];
    return;
  }

  const Eigen::MatrixXd& var = basis_->table_2d();
  for (auto& b : branch_mat_) b.setZero(var.rows(), var.cols());
  for (auto& b : branch_mat_)
    for (Eigen::Index i = 0; i < var.rows(); ++i)
      for (Eigen::Index j = 0; j < var.cols(); ++j)
        if (var(i, j) > 0.0) b(i, j) = std::sqrt(0.5 * var(i, j)) * rng.normal_complex();
  combined_mat_ = branch_mat_[0] + branch_mat_[1];
}

const Eigen::VectorXcd& FieldRealization::branch_1d(int branch) const {
  if (config().dim != Dimensionality::one_d)
    throw std::domain_error("branch_1d: field is two-dimensional");
  if (branch < 0 || branch > 1) throw std::domain_error("branch index must be 0 or 1");
  return branch_vec_[branch];
}

const Eigen::MatrixXcd& FieldRealization::branch_2d(int branch) const {
  if (config().dim != Dimensionality::two_d)
    throw std::domain_error("branch_2d: field is one-dimensional");
  if (branch < 0 || branch > 1) throw std::domain_error("branch index must be 0 or 1");
  return branch_mat_[branch];
}

const Eigen::VectorXcd& FieldRealization::combined_1d() const {
  if (config().dim != Dimensionality::one_d)
    throw std::domain_error("combined_1d: field is two-dimensional");
  return combined_vec_;
}

const Eigen::MatrixXcd& FieldRealization::combined_2d() const {
  if (config().dim != Dimensionality::two_d)
    throw std::domain_error("combined_2d: field is one-dimensional");
  return combined_mat_;
}

Eigen::MatrixXcd phase_matrix(const Eigen::VectorXd& xs, int length) {
  Eigen::MatrixXcd e(xs.size(), 2 * length);
  const double w = 2.0 * kPi / length;
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    for (int l = -length; l < length; ++l)
      e(i, l + length) = std::polar(1.0, w * l * xs[i]);
  return e;
}

std::complex<double> FieldRealization::evaluate(double x) const {
  if (config().dim != Dimensionality::one_d)
    throw std::domain_error("evaluate(x): field is two-dimensional");
  Eigen::VectorXd xs(1);
  xs[0] = x;
  return (phase_matrix(xs, config().length_x) * combined_vec_)(0);
}

std::complex<double> FieldRealization::evaluate(double x, double y) const {
  if (config().dim != Dimensionality::two_d)
    throw std::domain_error("evaluate(x, y): field is one-dimensional");
  Eigen::VectorXd xs(1), ys(1);
  xs[0] = x;
  ys[0] = y;
  return (phase_matrix(xs, config().length_x) * combined_mat_ *
          phase_matrix(ys, config().length_y).transpose())(0, 0);
}

Eigen::VectorXcd FieldRealization::evaluate_line(const Eigen::VectorXd& xs) const {
  if (config().dim != Dimensionality::one_d)
    throw std::domain_error("evaluate_line: field is two-dimensional");
  return phase_matrix(xs, config().length_x) * combined_vec_;
}

Eigen::MatrixXcd FieldRealization::evaluate_grid(const Eigen::VectorXd& xs,
                                                 const Eigen::VectorXd& ys) const {
  if (config().dim != Dimensionality::two_d)
    throw std::domain_error("evaluate_grid: field is one-dimensional");
  const Eigen::MatrixXcd ex = phase_matrix(xs, config().length_x);
  const Eigen::MatrixXcd ey = phase_matrix(ys, config().length_y);
  return ex * (combined_mat_ * ey.transpose());
}

FieldRealization draw_realization(const FieldConfig& config, std::uint64_t seed) {
  return FieldRealization(SpectralBasis::make(config), seed);
}

double autocorrelation_oracle(double delta, const FieldConfig& config, double tol) {
  config.validate();
  if (delta < 0.0) delta = -delta;
  const double c = 2.0 * kPi * delta;

  if (config.dim == Dimensionality::one_d) {
    // Propagating-line spectrum 1/sqrt(1-k^2) under k = sin(theta).
    const double v = adaptive_simpson([c](double th) { return std::cos(c * std::sin(th)); },
                                      0.0, 0.5 * kPi, 0.25 * tol);
    return v * 2.0 / kPi;
  }

  // Hemisphere average of plane waves with in-plane separation delta.
  auto inner = [c](double alpha) {
    const double s = std::sin(alpha);
    return s * adaptive_simpson([c, s](double beta) { return std::cos(c * s * std::cos(beta)); },
                                0.0, kPi, 1e-12, 40) / kPi;
  };
  return adaptive_simpson(inner, 0.0, 0.5 * kPi, 0.25 * tol);
}

void write_coefficients_csv(const FieldRealization& field, std::ostream& out) {
  using detail::fmt;
  out << "index_x,index_y,branch,variance,coeff_re,coeff_im\n";
  const FieldConfig& cfg = field.config();
  if (cfg.dim == Dimensionality::one_d) {
    const int L = cfg.length_x;
    const Eigen::VectorXd& var = field.basis().table_1d();
    for (int l = -L; l < L; ++l) {
      if (var[l + L] <= 0.0) continue;
      for (int b = 0; b < 2; ++b) {
        const std::complex<double> c = field.branch_1d(b)[l + L];
        out << l << ",0," << b << ',' << fmt(var[l + L]) << ',' << fmt(c.real()) << ','
            << fmt(c.imag()) << '\n';
      }
    }
    return;
  }
  const int Lx = cfg.length_x;
  const int Ly = cfg.length_y;
  const Eigen::MatrixXd& var = field.basis().table_2d();
  for (int lx = -Lx; lx < Lx; ++lx) {
    for (int ly = -Ly; ly < Ly; ++ly) {
      if (var(lx + Lx, ly + Ly) <= 0.0) continue;
      for (int b = 0; b < 2; ++b) {
        const std::complex<double> c = field.branch_2d(b)(lx + Lx, ly + Ly);
        out << lx << ',' << ly << ',' << b << ',' << fmt(var(lx + Lx, ly + Ly)) << ','
            << fmt(c.real()) << ',' << fmt(c.imag()) << '\n';
      }
    }
  }
}

}  // namespace faslab
