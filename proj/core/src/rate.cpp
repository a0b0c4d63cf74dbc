#include "faslab/rate.hpp"

#include <cmath>
#include <stdexcept>

#include "faslab/errors.hpp"
#include "faslab/rng.hpp"
#include "parallel.hpp"

namespace faslab {

void RateConfig::validate() const {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("RateConfig: bandwidth must be positive");
  if (coherence_symbols < 1)
    throw std::invalid_argument("RateConfig: coherence_symbols must be >= 1");
  if (!(snr > 0.0)) throw std::invalid_argument("RateConfig: snr must be positive");
}

double rate_perfect(std::complex<double> h, const RateConfig& config) {
  config.validate();
  return config.bandwidth_hz * std::log2(1.0 + std::norm(h) * config.snr / config.bandwidth_hz);
}

double rate_tas(std::complex<double> h, const RateConfig& config) {
  return rate_perfect(h, config);
}

double rate_imperfect(std::complex<double> h_true, std::complex<double> h_est,
                      long long pilot_total, const RateConfig& config) {
  config.validate();
  if (pilot_total < 0) throw std::domain_error("rate_imperfect: pilot_total must be >= 0");
  const double prelog =
      1.0 - static_cast<double>(pilot_total) / static_cast<double>(config.coherence_symbols);
  if (prelog <= 0.0) return 0.0;
  const double err = std::norm(h_true - h_est);
  const double sinr = std::norm(h_true) * config.snr / (err * config.snr + config.bandwidth_hz);
  return config.bandwidth_hz * prelog * std::log2(1.0 + sinr);
}

PortChoice best_port(const Eigen::MatrixXcd& values, const DenseGrid& grid) {
  if (values.rows() != grid.rows() || values.cols() != grid.cols())
    throw std::domain_error("best_port: values do not match the grid");
  Eigen::Index row = 0, col = 0;
  values.cwiseAbs2().maxCoeff(&row, &col);
  PortChoice choice;
  choice.row = row;
  choice.col = col;
  choice.x = grid.xs[row];
  choice.y = grid.dim == Dimensionality::two_d ? grid.ys[col] : 0.0;
  choice.value = values(row, col);
  return choice;
}

void RateSweepSpec::validate() const {
  rate.validate();
  if (values.empty()) throw std::invalid_argument("RateSweepSpec: empty sweep");
  if (trials < 1) throw std::invalid_argument("RateSweepSpec: trials must be >= 1");
  if (spectral_length < 1)
    throw std::invalid_argument("RateSweepSpec: spectral_length must be >= 1");
  if (lobe_order < 0) throw std::invalid_argument("RateSweepSpec: lobe_order must be >= 0");
  if (kind == RateSweepKind::pilots_per_sample) {
    if (!(width > 0.0)) throw std::invalid_argument("RateSweepSpec: width must be positive");
    for (double v : values)
      if (v < 1.0 || v != std::floor(v))
        throw std::invalid_argument("RateSweepSpec: pilot counts must be positive integers");
  } else {
    if (pilots_per_sample < 1)
      throw std::invalid_argument("RateSweepSpec: pilots_per_sample must be >= 1");
    for (double v : values)
      if (!(v > 0.0)) throw std::invalid_argument("RateSweepSpec: widths must be positive");
  }
}

namespace {

struct TrialRates {
  double perfect = 0.0;
  double imperfect = 0.0;
  double tas = 0.0;
};

// Aperture, grid and sample layout for one width; shared by every sweep point
// with that width so the expensive truth-grid evaluation runs once per trial.
struct Geometry {
  ApertureSpec aperture;
  DenseGrid grid;
  double width = 0.0;
  long long samples_total = 0;
  Eigen::Index center_row = 0, center_col = 0;
};

void accumulate(const std::vector<TrialRates>& rows, RatePoint& point) {
  double sp = 0, si = 0, st = 0;
  for (const auto& r : rows) {
    sp += r.perfect;
    si += r.imperfect;
    st += r.tas;
  }
  const double n = static_cast<double>(rows.size());
  point.perfect_mean = sp / n;
  point.imperfect_mean = si / n;
  point.tas_mean = st / n;
  double vp = 0, vi = 0, vt = 0;
  for (const auto& r : rows) {
    vp += (r.perfect - point.perfect_mean) * (r.perfect - point.perfect_mean);
    vi += (r.imperfect - point.imperfect_mean) * (r.imperfect - point.imperfect_mean);
    vt += (r.tas - point.tas_mean) * (r.tas - point.tas_mean);
  }
  const double scale = rows.size() > 1 ? 1.0 / (n * (n - 1.0)) : 0.0;
  point.perfect_se = std::sqrt(vp * scale);
  point.imperfect_se = std::sqrt(vi * scale);
  point.tas_se = std::sqrt(vt * scale);
}

}  // namespace

std::vector<RatePoint> monte_carlo_rates(const RateSweepSpec& spec) {
  spec.validate();

  FieldConfig field_config;
  field_config.dim = Dimensionality::two_d;
  field_config.length_x = spec.spectral_length;
  field_config.length_y = spec.spectral_length;
  const auto basis = SpectralBasis::make(field_config);

  std::vector<Geometry> geometry;
  std::vector<std::size_t> geom_of_point;
  std::vector<int> pilots_of_point;
  for (double v : spec.values) {
    const double width = spec.kind == RateSweepKind::aperture_width ? v : spec.width;
    pilots_of_point.push_back(spec.kind == RateSweepKind::pilots_per_sample
                                  ? static_cast<int>(v)
                                  : spec.pilots_per_sample);
    std::size_t g = 0;
    for (; g < geometry.size(); ++g)
      if (geometry[g].width == width) break;
    if (g == geometry.size()) {
      Geometry geo;
      geo.width = width;
      geo.aperture = ApertureSpec::symmetric(Dimensionality::two_d, width);
      const double distance = sampling_distance(width, spec.lobe_order);
      geo.grid = DenseGrid::over(geo.aperture, distance, distance, spec.nodes_per_sample);
      const long long n = sample_count(width, distance);
      geo.samples_total = n * n;
      geo.center_row = geo.grid.xs.size() / 2;
      geo.center_col = geo.grid.ys.size() / 2;
      geometry.push_back(std::move(geo));
    }
    geom_of_point.push_back(g);
  }

  std::vector<std::vector<TrialRates>> results(
      spec.values.size(), std::vector<TrialRates>(static_cast<std::size_t>(spec.trials)));

  detail::parallel_for(spec.trials, spec.jobs, [&](int trial) {
    const FieldRealization field(
        basis, derive_seed(spec.seed, stream::field, static_cast<std::uint64_t>(trial)));

    std::vector<Eigen::MatrixXcd> truths(geometry.size());
    std::vector<PortChoice> ideal(geometry.size());
    for (std::size_t g = 0; g < geometry.size(); ++g) {
      truths[g] = field.evaluate_grid(geometry[g].grid.xs, geometry[g].grid.ys);
      ideal[g] = best_port(truths[g], geometry[g].grid);
    }

    for (std::size_t p = 0; p < spec.values.size(); ++p) {
      const Geometry& geo = geometry[geom_of_point[p]];
      const Eigen::MatrixXcd& truth = truths[geom_of_point[p]];

      TrialRates r;
      r.perfect = rate_perfect(ideal[geom_of_point[p]].value, spec.rate);
      r.tas = rate_tas(truth(geo.center_row, geo.center_col), spec.rate);
      if (r.perfect < r.tas)
        throw InvariantViolation("selected-port rate fell below the fixed-port rate");

      PilotConfig pilots;
      pilots.pilots_per_sample = pilots_of_point[p];
      pilots.snr = spec.rate.snr;
      const SampleSet samples =
          observe(field, geo.aperture, spec.lobe_order, pilots,
                  derive_seed(spec.seed, stream::pilot, static_cast<std::uint64_t>(trial),
                              static_cast<std::uint64_t>(p)));
      const ReconstructedField recon = reconstruct(samples, geo.grid);
      const PortChoice chosen = best_port(recon.values, geo.grid);
      const long long pilot_total = pilot_budget(pilots_of_point[p], geo.samples_total);
      r.imperfect =
          rate_imperfect(truth(chosen.row, chosen.col), chosen.value, pilot_total, spec.rate);
      results[p][static_cast<std::size_t>(trial)] = r;
    }
  });

  std::vector<RatePoint> points;
  points.reserve(spec.values.size());
  for (std::size_t p = 0; p < spec.values.size(); ++p) {
    RatePoint point;
    point.sweep_value = spec.values[p];
    point.pilots_per_sample = pilots_of_point[p];
    point.width = geometry[geom_of_point[p]].width;
    point.samples_total = geometry[geom_of_point[p]].samples_total;
    point.pilot_total = pilot_budget(point.pilots_per_sample, point.samples_total);
    point.feasible = budget_feasible(point.pilot_total, spec.rate.coherence_symbols);
    point.trials = spec.trials;
    accumulate(results[p], point);
    points.push_back(point);
  }
  return points;
}

}  // namespace faslab
