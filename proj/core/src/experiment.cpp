#include "faslab/experiment.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "faslab/aperture.hpp"
#include "faslab/field.hpp"
#include "faslab/pilot.hpp"
#include "faslab/rate.hpp"
#include "faslab/reconstruction.hpp"
#include "faslab/rng.hpp"
#include "format.hpp"
#include "parallel.hpp"

namespace faslab {

namespace {

namespace fs = std::filesystem;
using detail::fmt;
using nlohmann::json;

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 8> kNames{{
    {ExperimentKind::recon_demo_1d, "recon-demo-1d"},
    {ExperimentKind::recon_demo_2d, "recon-demo-2d"},
    {ExperimentKind::spectrum, "spectrum"},
    {ExperimentKind::sweep_distance, "sweep-distance"},
    {ExperimentKind::sweep_width, "sweep-width"},
    {ExperimentKind::ci_validate, "ci-validate"},
    {ExperimentKind::rate_vs_zp, "rate-vs-zp"},
    {ExperimentKind::rate_vs_width, "rate-vs-width"},
}};

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt(values[i]);
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<ExperimentKind> experiment_from_name(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  return std::nullopt;
}

const std::vector<ExperimentKind>& all_experiments() {
  static const std::vector<ExperimentKind> kinds = [] {
    std::vector<ExperimentKind> v;
    for (const auto& [k, n] : kNames) v.push_back(k);
    return v;
  }();
  return kinds;
}

ExperimentSpec ExperimentSpec::defaults(ExperimentKind kind) {
  ExperimentSpec spec;
  spec.kind = kind;
  switch (kind) {
    case ExperimentKind::recon_demo_1d:
      spec.width = 4.0;
      spec.trials = 1;
      break;
    case ExperimentKind::recon_demo_2d:
    case ExperimentKind::spectrum:
      spec.trials = 1;
      break;
    case ExperimentKind::sweep_distance:
      spec.trials = 200;
      spec.snr_db_list = {0.0, 20.0};
      break;
    case ExperimentKind::sweep_width:
      spec.trials = 100;
      spec.widths = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
      break;
    case ExperimentKind::ci_validate:
      spec.trials = 100000;
      spec.snr_db_list = {10.0, 20.0};
      break;
    case ExperimentKind::rate_vs_zp:
      spec.trials = 500;
      spec.grid_per_sample = 16;
      break;
    case ExperimentKind::rate_vs_width:
      spec.trials = 500;
      spec.grid_per_sample = 8;
      spec.widths = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0};
      break;
  }
  return spec;
}

void ExperimentSpec::validate() const {
  if (coherence_symbols < 1) throw ConfigError("coherence_symbols must be >= 1");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz must be positive");
  if (pilots_per_sample < 1) throw ConfigError("pilots_per_sample must be >= 1");
  if (!std::isfinite(snr_db)) throw ConfigError("snr_db must be finite");
  if (spectral_length < 1) throw ConfigError("spectral_length must be >= 1");
  if (!(width > 0.0)) throw ConfigError("width must be positive");
  if (lobe_order < 0) throw ConfigError("lobe_order must be >= 0");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(confidence > 0.0) || confidence >= 1.0) throw ConfigError("confidence must lie in (0, 1)");
  if (zp_min < 1 || zp_max < zp_min) throw ConfigError("need 1 <= zp_min <= zp_max");
  for (double w : widths)
    if (!(w > 0.0)) throw ConfigError("widths entries must be positive");
  if (max_lobe < 0) throw ConfigError("max_lobe must be >= 0");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (grid_per_sample < 8) throw ConfigError("grid_per_sample must be >= 8");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  const bool needs_snr_list =
      kind == ExperimentKind::sweep_distance || kind == ExperimentKind::ci_validate;
  if (needs_snr_list && snr_db_list.empty()) throw ConfigError("snr_db_list must not be empty");
  const bool needs_widths =
      kind == ExperimentKind::sweep_width || kind == ExperimentKind::rate_vs_width;
  if (needs_widths && widths.empty()) throw ConfigError("widths must not be empty");
}

namespace {

template <class T>
T parse_number(const std::string& value, const std::string& key, int line);

template <>
double parse_number<double>(const std::string& value, const std::string& key, int line) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": value for key '" + key +
                          "' is not a number: '" + value + "'",
                      line);
  }
  if (pos != value.size())
    throw ConfigError("line " + std::to_string(line) + ": trailing characters in value for key '" +
                          key + "': '" + value + "'",
                      line);
  return v;
}

template <>
long long parse_number<long long>(const std::string& value, const std::string& key, int line) {
  const double v = parse_number<double>(value, key, line);
  if (v != std::floor(v))
    throw ConfigError(
        "line " + std::to_string(line) + ": key '" + key + "' requires an integer", line);
  return static_cast<long long>(v);
}

template <>
int parse_number<int>(const std::string& value, const std::string& key, int line) {
  return static_cast<int>(parse_number<long long>(value, key, line));
}

template <>
std::uint64_t parse_number<std::uint64_t>(const std::string& value, const std::string& key,
                                          int line) {
  try {
    // stoull wraps negative input instead of rejecting it.
    if (value.find('-') != std::string::npos) throw std::invalid_argument("negative");
    std::size_t pos = 0;
    const auto v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "' requires an unsigned integer",
                      line);
  }
}

std::vector<double> parse_list(const std::string& value, const std::string& key, int line) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty())
      throw ConfigError("line " + std::to_string(line) + ": empty entry in list for key '" + key +
                            "'",
                        line);
    out.push_back(parse_number<double>(t, key, line));
  }
  if (out.empty())
    throw ConfigError("line " + std::to_string(line) + ": empty list for key '" + key + "'", line);
  return out;
}

}  // namespace

ExperimentSpec parse_config_text(std::string_view text, ExperimentSpec base) {
  std::stringstream stream{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    const std::string stripped = trim(raw);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected key=value, got '" + stripped +
                            "'",
                        line);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line) + ": missing key before '='", line);
    if (value.empty())
      throw ConfigError("line " + std::to_string(line) + ": missing value for key '" + key + "'",
                        line);

    if (key == "coherence_symbols")
      base.coherence_symbols = parse_number<long long>(value, key, line);
    else if (key == "bandwidth_hz")
      base.bandwidth_hz = parse_number<double>(value, key, line);
    else if (key == "pilots_per_sample")
      base.pilots_per_sample = parse_number<int>(value, key, line);
    else if (key == "snr_db")
      base.snr_db = parse_number<double>(value, key, line);
    else if (key == "spectral_length")
      base.spectral_length = parse_number<int>(value, key, line);
    else if (key == "width")
      base.width = parse_number<double>(value, key, line);
    else if (key == "lobe_order")
      base.lobe_order = parse_number<int>(value, key, line);
    else if (key == "epsilon")
      base.epsilon = parse_number<double>(value, key, line);
    else if (key == "confidence")
      base.confidence = parse_number<double>(value, key, line);
    else if (key == "zp_min")
      base.zp_min = parse_number<int>(value, key, line);
    else if (key == "zp_max")
      base.zp_max = parse_number<int>(value, key, line);
    else if (key == "widths")
      base.widths = parse_list(value, key, line);
    else if (key == "snr_db_list")
      base.snr_db_list = parse_list(value, key, line);
    else if (key == "max_lobe")
      base.max_lobe = parse_number<int>(value, key, line);
    else if (key == "trials")
      base.trials = parse_number<int>(value, key, line);
    else if (key == "grid_per_sample")
      base.grid_per_sample = parse_number<int>(value, key, line);
    else if (key == "seed")
      base.seed = parse_number<std::uint64_t>(value, key, line);
    else if (key == "jobs")
      base.jobs = parse_number<int>(value, key, line);
    else if (key == "out_dir")
      base.out_dir = value;
    else
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'", line);
  }
  base.validate();
  return base;
}

ExperimentSpec load_config_file(const std::string& path, ExperimentSpec base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), std::move(base));
}

namespace {

std::vector<std::pair<std::string, std::string>> resolved_params(const ExperimentSpec& spec) {
  return {
      {"experiment", std::string(to_string(spec.kind))},
      {"coherence_symbols", fmt(spec.coherence_symbols)},
      {"bandwidth_hz", fmt(spec.bandwidth_hz)},
      {"pilots_per_sample", fmt(spec.pilots_per_sample)},
      {"snr_db", fmt(spec.snr_db)},
      {"spectral_length", fmt(spec.spectral_length)},
      {"width", fmt(spec.width)},
      {"lobe_order", fmt(spec.lobe_order)},
      {"epsilon", fmt(spec.epsilon)},
      {"confidence", fmt(spec.confidence)},
      {"zp_min", fmt(spec.zp_min)},
      {"zp_max", fmt(spec.zp_max)},
      {"widths", join(spec.widths)},
      {"snr_db_list", join(spec.snr_db_list)},
      {"max_lobe", fmt(spec.max_lobe)},
      {"trials", fmt(spec.trials)},
      {"grid_per_sample", fmt(spec.grid_per_sample)},
      {"seed", std::to_string(spec.seed)},
      {"jobs", fmt(spec.jobs)},
  };
}

// CSV file with resolved parameters as leading `# key=value` comment lines.
class CsvFile {
 public:
  CsvFile(const ExperimentSpec& spec, const std::string& basename,
          std::vector<std::string>& outputs) {
    fs::create_directories(spec.out_dir);
    path_ = (fs::path(spec.out_dir) / basename).string();
    out_.open(path_, std::ios::binary);
    if (!out_) throw std::runtime_error("cannot open output file '" + path_ + "'");
    for (const auto& [k, v] : resolved_params(spec)) out_ << "# " << k << '=' << v << '\n';
    outputs.push_back(path_);
  }

  std::ostream& stream() { return out_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

void write_sidecar(const ExperimentSpec& spec, const std::vector<std::string>& outputs,
                   const json& summary, std::vector<std::string>& files) {
  fs::create_directories(spec.out_dir);
  const std::string path =
      (fs::path(spec.out_dir) / (std::string(to_string(spec.kind)) + ".json")).string();
  json doc;
  doc["experiment"] = std::string(to_string(spec.kind));
  doc["seed"] = spec.seed;
  json params;
  for (const auto& [k, v] : resolved_params(spec)) params[k] = v;
  doc["parameters"] = params;
  json outs = json::array();
  for (const auto& f : outputs) outs.push_back(fs::path(f).filename().string());
  doc["outputs"] = outs;
  doc["summary"] = summary;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << doc.dump(2) << '\n';
  files.push_back(path);
}

struct SchemeLayout {
  std::string label;
  int lobe_order = -1;  // -1 = half-wavelength spacing
  double distance = 0.0;
};

std::vector<SchemeLayout> distance_schemes(double width, int max_lobe) {
  std::vector<SchemeLayout> schemes;
  schemes.push_back({"half", -1, 0.5});
  for (int d = 0; d <= max_lobe; ++d)
    schemes.push_back({"lobe" + std::to_string(d), d, sampling_distance(width, d)});
  return schemes;
}

// ---------------------------------------------------------------------------
// Single-realization reconstruction demos.

std::vector<std::string> run_recon_demo(const ExperimentSpec& spec, std::ostream& log) {
  const bool one_d = spec.kind == ExperimentKind::recon_demo_1d;
  FieldConfig config;
  config.dim = one_d ? Dimensionality::one_d : Dimensionality::two_d;
  config.length_x = spec.spectral_length;
  config.length_y = spec.spectral_length;
  const auto basis = SpectralBasis::make(config);
  const FieldRealization field(basis, derive_seed(spec.seed, stream::field, 0));

  const ApertureSpec aperture = ApertureSpec::symmetric(config.dim, spec.width);
  PilotConfig pilots;
  pilots.pilots_per_sample = spec.pilots_per_sample;
  pilots.snr = db_to_linear(spec.snr_db);

  const double d0 = sampling_distance(spec.width, spec.lobe_order);
  const SampleSet set_lobe = observe(field, aperture, spec.lobe_order, pilots,
                                     derive_seed(spec.seed, stream::pilot, 0));
  const SampleSet set_half = observe_spacing(field, aperture, 0.5, pilots,
                                             derive_seed(spec.seed, stream::pilot, 1));

  const DenseGrid grid = DenseGrid::over(aperture, d0, d0, spec.grid_per_sample);
  Eigen::MatrixXcd truth;
  if (one_d)
    truth = field.evaluate_line(grid.xs);
  else
    truth = field.evaluate_grid(grid.xs, grid.ys);

  const ReconstructedField rec_lobe = reconstruct(set_lobe, grid);
  const ReconstructedField rec_half = reconstruct(set_half, grid);
  const double nmse_lobe = nmse(rec_lobe.values, truth, grid);
  const double nmse_half = nmse(rec_half.values, truth, grid);

  std::vector<std::string> files;
  const std::string name(to_string(spec.kind));
  {
    CsvFile csv(spec, name + ".csv", files);
    auto& out = csv.stream();
    if (one_d) {
      out << "x,truth_re,truth_im,recon_lobe_re,recon_lobe_im,recon_half_re,recon_half_im\n";
      for (Eigen::Index g = 0; g < grid.xs.size(); ++g)
        out << fmt(grid.xs[g]) << ',' << fmt(truth(g, 0).real()) << ',' << fmt(truth(g, 0).imag())
            << ',' << fmt(rec_lobe.values(g, 0).real()) << ',' << fmt(rec_lobe.values(g, 0).imag())
            << ',' << fmt(rec_half.values(g, 0).real()) << ',' << fmt(rec_half.values(g, 0).imag())
            << '\n';
    } else {
      out << "x,y,truth_re,truth_im,recon_lobe_re,recon_lobe_im,recon_half_re,recon_half_im\n";
      for (Eigen::Index g = 0; g < grid.xs.size(); ++g)
        for (Eigen::Index h = 0; h < grid.ys.size(); ++h)
          out << fmt(grid.xs[g]) << ',' << fmt(grid.ys[h]) << ',' << fmt(truth(g, h).real()) << ','
              << fmt(truth(g, h).imag()) << ',' << fmt(rec_lobe.values(g, h).real()) << ','
              << fmt(rec_lobe.values(g, h).imag()) << ',' << fmt(rec_half.values(g, h).real())
              << ',' << fmt(rec_half.values(g, h).imag()) << '\n';
    }
  }
  {
    CsvFile csv(spec, name + "-samples.csv", files);
    auto& out = csv.stream();
    out << "scheme,";
    std::ostringstream tmp;
    write_samples_csv(set_lobe, tmp);
    std::string body = tmp.str();
    out << body.substr(0, body.find('\n')) << '\n';  // header row
    auto emit = [&](const char* scheme, const SampleSet& set) {
      std::ostringstream rows;
      write_samples_csv(set, rows);
      std::string text = rows.str();
      std::size_t start = text.find('\n') + 1;
      while (start < text.size()) {
        const std::size_t stop = text.find('\n', start);
        out << scheme << ',' << text.substr(start, stop - start) << '\n';
        if (stop == std::string::npos) break;
        start = stop + 1;
      }
    };
    emit("lobe", set_lobe);
    emit("half", set_half);
  }

  json summary;
  summary["nmse_lobe"] = nmse_lobe;
  summary["nmse_half"] = nmse_half;
  summary["distance_lobe"] = d0;
  summary["samples_lobe"] = set_lobe.values.size();
  summary["samples_half"] = set_half.values.size();
  write_sidecar(spec, files, summary, files);
  log << name << ": nmse(lobe" << spec.lobe_order << ")=" << fmt(nmse_lobe)
            << " nmse(half)=" << fmt(nmse_half) << '\n';
  return files;
}

// ---------------------------------------------------------------------------
// Power spectra of the windowed truth, sampled trains and reconstructions.

std::vector<std::string> run_spectrum(const ExperimentSpec& spec, std::ostream& log) {
  FieldConfig config;
  config.dim = Dimensionality::two_d;
  config.length_x = spec.spectral_length;
  config.length_y = spec.spectral_length;
  const FieldRealization field(SpectralBasis::make(config),
                               derive_seed(spec.seed, stream::field, 0));
  const ApertureSpec aperture = ApertureSpec::symmetric(Dimensionality::two_d, spec.width);

  const double d0 = sampling_distance(spec.width, spec.lobe_order);
  const DenseGrid grid = DenseGrid::over(aperture, d0, d0, spec.grid_per_sample);
  const Eigen::MatrixXcd truth = field.evaluate_grid(grid.xs, grid.ys);

  const SampleSet set_lobe = observe(field, aperture, spec.lobe_order);
  const SampleSet set_half = observe_spacing(field, aperture, 0.5);

  const PowerSpectrum ps_truth = power_spectrum(truth, grid);
  const PowerSpectrum ps_lobe_train = power_spectrum(impulse_train(set_lobe, grid), grid);
  const PowerSpectrum ps_lobe_rec = power_spectrum(reconstruct(set_lobe, grid).values, grid);

  // Half-wavelength samples do not land on the lobe grid's nodes; use a grid
  // matched to that spacing for its impulse train.
  const DenseGrid grid_half = DenseGrid::over(aperture, 0.5, 0.5, spec.grid_per_sample);
  const PowerSpectrum ps_half_train =
      power_spectrum(impulse_train(set_half, grid_half), grid_half);
  const PowerSpectrum ps_half_rec = power_spectrum(reconstruct(set_half, grid).values, grid);

  std::vector<std::string> files;
  {
    CsvFile csv(spec, "spectrum.csv", files);
    auto& out = csv.stream();
    out << "kx,ky,truth,sampled_lobe,recon_lobe,recon_half\n";
    for (Eigen::Index r = 0; r < ps_truth.power.rows(); ++r)
      for (Eigen::Index c = 0; c < ps_truth.power.cols(); ++c)
        out << fmt(ps_truth.wavenumbers_x[r]) << ',' << fmt(ps_truth.wavenumbers_y[c]) << ','
            << fmt(ps_truth.power(r, c)) << ',' << fmt(ps_lobe_train.power(r, c)) << ','
            << fmt(ps_lobe_rec.power(r, c)) << ',' << fmt(ps_half_rec.power(r, c)) << '\n';
  }
  {
    CsvFile csv(spec, "spectrum-half-train.csv", files);
    auto& out = csv.stream();
    out << "kx,ky,sampled_half\n";
    for (Eigen::Index r = 0; r < ps_half_train.power.rows(); ++r)
      for (Eigen::Index c = 0; c < ps_half_train.power.cols(); ++c)
        out << fmt(ps_half_train.wavenumbers_x[r]) << ',' << fmt(ps_half_train.wavenumbers_y[c])
            << ',' << fmt(ps_half_train.power(r, c)) << '\n';
  }

  // Fraction of windowed energy beyond the propagating disk: the leakage that
  // makes sub-half-wavelength sampling necessary.
  const double kappa = 2.0 * std::numbers::pi;
  double inside = 0.0, outside = 0.0;
  for (Eigen::Index r = 0; r < ps_truth.power.rows(); ++r)
    for (Eigen::Index c = 0; c < ps_truth.power.cols(); ++c) {
      const double k2 = ps_truth.wavenumbers_x[r] * ps_truth.wavenumbers_x[r] +
                        ps_truth.wavenumbers_y[c] * ps_truth.wavenumbers_y[c];
      (k2 <= kappa * kappa ? inside : outside) += ps_truth.power(r, c);
    }

  json summary;
  summary["leaked_energy_fraction"] = outside / (inside + outside);
  write_sidecar(spec, files, summary, files);
  log << "spectrum: leaked_energy_fraction="
            << fmt(outside / (inside + outside)) << '\n';
  return files;
}

// ---------------------------------------------------------------------------
// NMSE vs sampling distance across SNRs (paired trials).

std::vector<std::string> run_sweep_distance(const ExperimentSpec& spec, std::ostream& log) {
  FieldConfig config;
  config.dim = Dimensionality::two_d;
  config.length_x = spec.spectral_length;
  config.length_y = spec.spectral_length;
  const auto basis = SpectralBasis::make(config);
  const ApertureSpec aperture = ApertureSpec::symmetric(Dimensionality::two_d, spec.width);
  const auto schemes = distance_schemes(spec.width, spec.max_lobe);
  const auto& snrs = spec.snr_db_list;

  std::vector<DenseGrid> grids;
  for (const auto& s : schemes)
    grids.push_back(DenseGrid::over(aperture, s.distance, s.distance, spec.grid_per_sample));

  // nmse[scheme][snr][trial]
  std::vector<std::vector<std::vector<double>>> table(
      schemes.size(), std::vector<std::vector<double>>(
                          snrs.size(), std::vector<double>(static_cast<std::size_t>(spec.trials))));

  detail::parallel_for(spec.trials, spec.jobs, [&](int trial) {
    const FieldRealization field(
        basis, derive_seed(spec.seed, stream::field, static_cast<std::uint64_t>(trial)));
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      const Eigen::MatrixXcd truth = field.evaluate_grid(grids[s].xs, grids[s].ys);
      for (std::size_t q = 0; q < snrs.size(); ++q) {
        PilotConfig pilots;
        pilots.pilots_per_sample = spec.pilots_per_sample;
        pilots.snr = db_to_linear(snrs[q]);
        const SampleSet samples = observe_spacing(
            field, aperture, schemes[s].distance, pilots,
            derive_seed(spec.seed, stream::pilot, static_cast<std::uint64_t>(trial),
                        static_cast<std::uint64_t>(s * 256 + q)));
        const double v = nmse(reconstruct(samples, grids[s]).values, truth, grids[s]);
        if (!std::isfinite(v)) throw InvariantViolation("sweep-distance: NMSE is not finite");
        table[s][q][static_cast<std::size_t>(trial)] = v;
      }
    }
  });

  std::vector<std::string> files;
  json summary;
  {
    CsvFile csv(spec, "sweep-distance.csv", files);
    auto& out = csv.stream();
    out << "snr_db,scheme,lobe_order,distance,samples_per_dim,samples_total,pilot_total,trials,"
           "nmse_mean,nmse_se,frac_below_half\n";
    for (std::size_t q = 0; q < snrs.size(); ++q) {
      for (std::size_t s = 0; s < schemes.size(); ++s) {
        const auto& rows = table[s][q];
        const double n = static_cast<double>(rows.size());
        double mean = 0;
        for (double v : rows) mean += v;
        mean /= n;
        double var = 0;
        for (double v : rows) var += (v - mean) * (v - mean);
        const double se = rows.size() > 1 ? std::sqrt(var / (n * (n - 1.0))) : 0.0;
        int below = 0;
        for (std::size_t t = 0; t < rows.size(); ++t)
          if (rows[t] < table[0][q][t]) ++below;
        const int per_dim = sample_count(spec.width, schemes[s].distance);
        out << fmt(snrs[q]) << ',' << schemes[s].label << ',' << schemes[s].lobe_order << ','
            << fmt(schemes[s].distance) << ',' << per_dim << ','
            << static_cast<long long>(per_dim) * per_dim << ','
            << pilot_budget(spec.pilots_per_sample, static_cast<long long>(per_dim) * per_dim)
            << ',' << spec.trials << ',' << fmt(mean) << ',' << fmt(se) << ','
            << fmt(static_cast<double>(below) / n) << '\n';
        summary[std::string("nmse_") + schemes[s].label + "_snr" + fmt(snrs[q])] = mean;
      }
    }
  }
  write_sidecar(spec, files, summary, files);
  log << "sweep-distance: wrote " << spec.trials << " trials x " << schemes.size()
            << " schemes x " << snrs.size() << " snrs\n";
  return files;
}

// ---------------------------------------------------------------------------
// 1D NMSE gap between half-wavelength and leakage-aware spacing vs width.

std::vector<std::string> run_sweep_width(const ExperimentSpec& spec, std::ostream& log) {
  FieldConfig config;
  config.dim = Dimensionality::one_d;
  config.length_x = spec.spectral_length;
  const auto basis = SpectralBasis::make(config);

  struct Cell {
    double width = 0, distance = 0;
    int lobe = -1;
    std::vector<double> rows;
  };
  std::vector<std::array<Cell, 2>> table(spec.widths.size());
  for (std::size_t w = 0; w < spec.widths.size(); ++w) {
    table[w][0] = {spec.widths[w], 0.5, -1, std::vector<double>(static_cast<std::size_t>(spec.trials))};
    table[w][1] = {spec.widths[w], sampling_distance(spec.widths[w], spec.lobe_order),
                   spec.lobe_order, std::vector<double>(static_cast<std::size_t>(spec.trials))};
  }

  detail::parallel_for(spec.trials, spec.jobs, [&](int trial) {
    const FieldRealization field(
        basis, derive_seed(spec.seed, stream::field, static_cast<std::uint64_t>(trial)));
    for (std::size_t w = 0; w < spec.widths.size(); ++w) {
      const ApertureSpec aperture =
          ApertureSpec::symmetric(Dimensionality::one_d, spec.widths[w]);
      for (int s = 0; s < 2; ++s) {
        Cell& cell = table[w][static_cast<std::size_t>(s)];
        const DenseGrid grid =
            DenseGrid::over(aperture, cell.distance, 0.0, spec.grid_per_sample);
        const Eigen::MatrixXcd truth = field.evaluate_line(grid.xs);
        PilotConfig pilots;
        pilots.pilots_per_sample = spec.pilots_per_sample;
        pilots.snr = db_to_linear(spec.snr_db);
        const SampleSet samples = observe_spacing(
            field, aperture, cell.distance, pilots,
            derive_seed(spec.seed, stream::pilot, static_cast<std::uint64_t>(trial),
                        static_cast<std::uint64_t>(w * 4 + static_cast<std::size_t>(s))));
        const double v = nmse(reconstruct(samples, grid).values, truth, grid);
        if (!std::isfinite(v)) throw InvariantViolation("sweep-width: NMSE is not finite");
        cell.rows[static_cast<std::size_t>(trial)] = v;
      }
    }
  });

  std::vector<std::string> files;
  json summary;
  {
    CsvFile csv(spec, "sweep-width.csv", files);
    auto& out = csv.stream();
    out << "width,scheme,lobe_order,distance,distance_gap_exact,samples,pilot_total,trials,"
           "nmse_mean,nmse_se\n";
    for (std::size_t w = 0; w < spec.widths.size(); ++w) {
      const double gap = 1.0 / (2.0 * spec.widths[w] + 2.0);
      for (int s = 0; s < 2; ++s) {
        const Cell& cell = table[w][static_cast<std::size_t>(s)];
        const double n = static_cast<double>(cell.rows.size());
        double mean = 0;
        for (double v : cell.rows) mean += v;
        mean /= n;
        double var = 0;
        for (double v : cell.rows) var += (v - mean) * (v - mean);
        const double se = cell.rows.size() > 1 ? std::sqrt(var / (n * (n - 1.0))) : 0.0;
        const int count = sample_count(cell.width, cell.distance);
        out << fmt(cell.width) << ',' << (s == 0 ? "half" : "lobe") << ',' << cell.lobe << ','
            << fmt(cell.distance) << ',' << fmt(gap) << ',' << count << ','
            << pilot_budget(spec.pilots_per_sample, count) << ',' << spec.trials << ','
            << fmt(mean) << ',' << fmt(se) << '\n';
      }
    }
  }
  write_sidecar(spec, files, summary, files);
  log << "sweep-width: wrote " << spec.widths.size() << " widths x 2 schemes\n";
  return files;
}

// ---------------------------------------------------------------------------
// Analytic vs empirical estimation-accuracy confidence.

std::vector<std::string> run_ci_validate(const ExperimentSpec& spec, std::ostream& log) {
  const auto& snrs = spec.snr_db_list;
  const int zp_count = spec.zp_max - spec.zp_min + 1;
  const int points = static_cast<int>(snrs.size()) * zp_count;
  std::vector<double> analytic(static_cast<std::size_t>(points));
  std::vector<double> empirical(static_cast<std::size_t>(points));

  detail::parallel_for(points, spec.jobs, [&](int point) {
    const int q = point / zp_count;
    const int zp = spec.zp_min + point % zp_count;
    const double snr = db_to_linear(snrs[static_cast<std::size_t>(q)]);
    analytic[static_cast<std::size_t>(point)] = ci_probability(spec.epsilon, zp, snr);

    PilotConfig pilots;
    pilots.pilots_per_sample = zp;
    pilots.snr = snr;
    const std::complex<double> channel{0.6, -0.8};
    Rng rng(derive_seed(spec.seed, stream::coverage, static_cast<std::uint64_t>(point)));
    int hits = 0;
    for (int t = 0; t < spec.trials; ++t) {
      const std::complex<double> err = estimate_channel(channel, pilots, rng) - channel;
      if (std::abs(err.real()) < spec.epsilon) ++hits;
    }
    empirical[static_cast<std::size_t>(point)] =
        static_cast<double>(hits) / static_cast<double>(spec.trials);
  });

  std::vector<std::string> files;
  double max_gap = 0.0;
  {
    CsvFile csv(spec, "ci-validate.csv", files);
    auto& out = csv.stream();
    out << "snr_db,pilots_per_sample,epsilon,analytic,empirical,trials\n";
    for (int point = 0; point < points; ++point) {
      const int q = point / zp_count;
      const int zp = spec.zp_min + point % zp_count;
      max_gap = std::max(max_gap, std::abs(analytic[static_cast<std::size_t>(point)] -
                                           empirical[static_cast<std::size_t>(point)]));
      out << fmt(snrs[static_cast<std::size_t>(q)]) << ',' << zp << ',' << fmt(spec.epsilon) << ','
          << fmt(analytic[static_cast<std::size_t>(point)]) << ','
          << fmt(empirical[static_cast<std::size_t>(point)]) << ',' << spec.trials << '\n';
    }
  }

  json summary;
  summary["max_abs_gap"] = max_gap;
  CiSpec target;
  target.epsilon = spec.epsilon;
  target.confidence = spec.confidence;
  for (double snr_db : snrs)
    summary["min_pilots_snr" + fmt(snr_db)] = min_pilots(target, db_to_linear(snr_db));
  write_sidecar(spec, files, summary, files);
  log << "ci-validate: max |analytic - empirical| = " << fmt(max_gap) << '\n';
  return files;
}

// ---------------------------------------------------------------------------
// Rate sweeps.

std::vector<std::string> run_rate_sweep(const ExperimentSpec& spec, std::ostream& log) {
  RateSweepSpec sweep;
  sweep.kind = spec.kind == ExperimentKind::rate_vs_zp ? RateSweepKind::pilots_per_sample
                                                       : RateSweepKind::aperture_width;
  if (sweep.kind == RateSweepKind::pilots_per_sample) {
    for (int zp = spec.zp_min; zp <= spec.zp_max; ++zp) sweep.values.push_back(zp);
  } else {
    sweep.values = spec.widths;
  }
  sweep.width = spec.width;
  sweep.pilots_per_sample = spec.pilots_per_sample;
  sweep.lobe_order = spec.lobe_order;
  sweep.spectral_length = spec.spectral_length;
  sweep.nodes_per_sample = spec.grid_per_sample;
  sweep.trials = spec.trials;
  sweep.jobs = spec.jobs;
  sweep.seed = spec.seed;
  sweep.rate.bandwidth_hz = spec.bandwidth_hz;
  sweep.rate.coherence_symbols = spec.coherence_symbols;
  sweep.rate.snr = db_to_linear(spec.snr_db);

  const auto points = monte_carlo_rates(sweep);

  std::vector<std::string> files;
  const std::string name(to_string(spec.kind));
  double best_mean = 0.0, best_value = 0.0;
  {
    CsvFile csv(spec, name + ".csv", files);
    auto& out = csv.stream();
    out << "sweep_value,pilots_per_sample,width,samples_total,pilot_total,feasible,trials,"
           "rate_perfect_mean,rate_perfect_se,rate_mle_mean,rate_mle_se,rate_tas_mean,rate_tas_se,"
           "rate_perfect_bits_hz,rate_mle_bits_hz,rate_tas_bits_hz\n";
    for (const auto& p : points) {
      if (p.imperfect_mean > best_mean) {
        best_mean = p.imperfect_mean;
        best_value = p.sweep_value;
      }
      out << fmt(p.sweep_value) << ',' << p.pilots_per_sample << ',' << fmt(p.width) << ','
          << p.samples_total << ',' << p.pilot_total << ',' << (p.feasible ? 1 : 0) << ','
          << p.trials << ',' << fmt(p.perfect_mean) << ',' << fmt(p.perfect_se) << ','
          << fmt(p.imperfect_mean) << ',' << fmt(p.imperfect_se) << ',' << fmt(p.tas_mean) << ','
          << fmt(p.tas_se) << ',' << fmt(p.perfect_mean / spec.bandwidth_hz) << ','
          << fmt(p.imperfect_mean / spec.bandwidth_hz) << ','
          << fmt(p.tas_mean / spec.bandwidth_hz) << '\n';
    }
  }

  json summary;
  summary["best_sweep_value"] = best_value;
  summary["best_rate_mle_mean"] = best_mean;
  write_sidecar(spec, files, summary, files);
  log << name << ": best mean estimated-CSI rate " << fmt(best_mean) << " at sweep value "
            << fmt(best_value) << '\n';
  return files;
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentSpec& spec) {
  return run_experiment(spec, std::cout);
}

std::vector<std::string> run_experiment(const ExperimentSpec& spec, std::ostream& log) {
  spec.validate();
  switch (spec.kind) {
    case ExperimentKind::recon_demo_1d:
    case ExperimentKind::recon_demo_2d:
      return run_recon_demo(spec, log);
    case ExperimentKind::spectrum:
      return run_spectrum(spec, log);
    case ExperimentKind::sweep_distance:
      return run_sweep_distance(spec, log);
    case ExperimentKind::sweep_width:
      return run_sweep_width(spec, log);
    case ExperimentKind::ci_validate:
      return run_ci_validate(spec, log);
    case ExperimentKind::rate_vs_zp:
    case ExperimentKind::rate_vs_width:
      return run_rate_sweep(spec, log);
  }
  throw std::logic_error("run_experiment: unhandled kind");
}

}  // namespace faslab
