// SPDX-License-Identifier: Apache-2.0
//
// Declarative experiments: JSON configuration, hypothesis validation, and the
// run / replay / admissibility drivers behind the command-line tool.
#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "holoshot/error.hpp"
#include "holoshot/io.hpp"
#include "holoshot/lattice.hpp"
#include "holoshot/reconstruct.hpp"
#include "holoshot/recover.hpp"
#include "holoshot/refinable.hpp"
#include "holoshot/targets.hpp"
#include "holoshot/waves.hpp"

namespace holoshot {

using json = nlohmann::json;

struct TargetSpec {
  std::string name = "gaussian_chirp";
  TargetParams params;
};

struct WaveSpec {
  std::string family = "plane";         // plane | spherical
  std::string design = "dyadic_plane";  // dyadic_plane | dyadic_spherical | custom
  double theta = 0.999;
  double epsilon = 0.3;
  std::size_t axis = 1;  // 1-based companion axis j0
  double amplitude = 1.0;
  std::vector<double> wavevector;
  double wavenumber = 0.0;
  bool level_scaling = true;
};

struct ExperimentConfig {
  TargetSpec target;
  WaveSpec wave;
  std::vector<int> phi_orders{3};
  std::vector<double> roi_lo{1.0};
  std::vector<double> roi_hi{2.0};
  int level_min = 2;
  int level_max = 7;
  std::optional<int> level_cap;  // default: none for d = 1, 7 otherwise
  double cells_per_unit = 0.0;   // 0: 2^{level_max + 4}
  double noise_scale = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> s;         // analysis Sobolev index s
  std::optional<double> varsigma;  // analysis Sobolev index varsigma
  bool write_intensities = true;

  std::size_t dim() const { return roi_lo.size(); }
  int effective_level_cap() const { return level_cap.value_or(dim() >= 2 ? 7 : kMaxLevel); }
};

/// One violated hypothesis or invalid field.
struct Violation {
  std::string code;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<Violation> violations)
      : Error(code_for(violations), summary(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

  /// Machine-readable reason: the first violation's code.
  std::string reason() const { return violations_.empty() ? "configuration" : violations_[0].code; }

 private:
  static ErrorCode code_for(const std::vector<Violation>& v) {
    for (const auto& x : v) {
      if (x.code == "zero-in-lattice") return ErrorCode::kZeroInLattice;
    }
    return ErrorCode::kConfiguration;
  }
  static std::string summary(const std::vector<Violation>& v) {
    std::string s = "invalid configuration:";
    for (const auto& x : v) s += " [" + x.code + "] " + x.message + ";";
    return s;
  }

  std::vector<Violation> violations_;
};

namespace detail {

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

inline std::vector<double> as_vector(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  return {j.get<double>()};
}

}  // namespace detail

/// Parses a JSON experiment description; missing fields keep their defaults.
inline ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("target")) {
      const auto& t = j.at("target");
      detail::read_opt(t, "name", c.target.name);
      detail::read_opt(t, "sigma", c.target.params.sigma);
      if (t.contains("center")) c.target.params.center = detail::as_vector(t.at("center"));
      if (t.contains("frequency")) {
        c.target.params.frequency = detail::as_vector(t.at("frequency"));
      }
      detail::read_opt(t, "modulation", c.target.params.modulation);
      detail::read_opt(t, "order", c.target.params.order);
      detail::read_opt(t, "phase", c.target.params.phase);
      if (t.contains("value")) {
        const auto z = detail::as_vector(t.at("value"));
        c.target.params.value = {z.empty() ? 0.0 : z[0], z.size() > 1 ? z[1] : 0.0};
      }
    }
    if (j.contains("wave")) {
      const auto& w = j.at("wave");
      detail::read_opt(w, "family", c.wave.family);
      detail::read_opt(w, "design", c.wave.design);
      if (!w.contains("family")) {
        c.wave.family = c.wave.design == "dyadic_spherical" ? "spherical" : "plane";
      }
      if (!w.contains("design") && c.wave.family == "spherical") c.wave.design = "dyadic_spherical";
      detail::read_opt(w, "theta", c.wave.theta);
      detail::read_opt(w, "epsilon", c.wave.epsilon);
      detail::read_opt(w, "axis", c.wave.axis);
      detail::read_opt(w, "amplitude", c.wave.amplitude);
      if (w.contains("wavevector")) c.wave.wavevector = detail::as_vector(w.at("wavevector"));
      detail::read_opt(w, "wavenumber", c.wave.wavenumber);
      detail::read_opt(w, "level_scaling", c.wave.level_scaling);
    }
    if (j.contains("phi")) detail::read_opt(j.at("phi"), "orders", c.phi_orders);
    if (j.contains("roi")) {
      c.roi_lo = detail::as_vector(j.at("roi").at("lo"));
      c.roi_hi = detail::as_vector(j.at("roi").at("hi"));
    }
    if (j.contains("levels")) {
      const auto& l = j.at("levels");
      detail::read_opt(l, "min", c.level_min);
      detail::read_opt(l, "max", c.level_max);
      if (l.contains("cap")) c.level_cap = l.at("cap").get<int>();
    }
    if (j.contains("grid")) detail::read_opt(j.at("grid"), "cells_per_unit", c.cells_per_unit);
    if (j.contains("noise")) {
      detail::read_opt(j.at("noise"), "scale", c.noise_scale);
      detail::read_opt(j.at("noise"), "seed", c.seed);
    }
    if (j.contains("analysis")) {
      const auto& a = j.at("analysis");
      if (a.contains("s")) c.s = a.at("s").get<double>();
      if (a.contains("varsigma")) c.varsigma = a.at("varsigma").get<double>();
    }
    if (j.contains("output")) detail::read_opt(j.at("output"), "intensities", c.write_intensities);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  auto in = io::open_input(path);
  try {
    return parse_config(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, "config '" + path + "': " + e.what());
  }
}

/// Full configuration with defaults filled in, for self-describing reports.
inline json to_json(const ExperimentConfig& c) {
  json j;
  const auto& p = c.target.params;
  j["target"] = {{"name", c.target.name},      {"sigma", p.sigma},
                 {"center", p.center},         {"frequency", p.frequency},
                 {"modulation", p.modulation}, {"order", p.order},
                 {"phase", p.phase},           {"value", {p.value.real(), p.value.imag()}}};
  j["wave"] = {{"family", c.wave.family},
               {"design", c.wave.design},
               {"theta", c.wave.theta},
               {"epsilon", c.wave.epsilon},
               {"axis", c.wave.axis},
               {"amplitude", c.wave.amplitude},
               {"wavevector", c.wave.wavevector},
               {"wavenumber", c.wave.wavenumber},
               {"level_scaling", c.wave.level_scaling}};
  j["phi"] = {{"orders", c.phi_orders}};
  j["roi"] = {{"lo", c.roi_lo}, {"hi", c.roi_hi}};
  j["levels"] = {{"min", c.level_min}, {"max", c.level_max}, {"cap", c.effective_level_cap()}};
  j["grid"] = {{"cells_per_unit",
                c.cells_per_unit > 0.0 ? c.cells_per_unit : std::ldexp(1.0, c.level_max + 4)}};
  j["noise"] = {{"scale", c.noise_scale}, {"seed", c.seed}};
  j["analysis"] = json::object();
  if (c.s) j["analysis"]["s"] = *c.s;
  if (c.varsigma) j["analysis"]["varsigma"] = *c.varsigma;
  j["output"] = {{"intensities", c.write_intensities}};
  return j;
}

/// Every violated hypothesis decidable from the configuration; an empty list
/// means a run cannot fail on hypothesis grounds.
inline std::vector<Violation> validate(const ExperimentConfig& c) {
  std::vector<Violation> out;
  auto fail = [&](std::string code, std::string msg) {
    out.push_back({std::move(code), std::move(msg)});
  };
  const std::size_t d = c.dim();

  std::optional<Roi> roi;
  if (d == 0 || d > kMaxDim || c.roi_hi.size() != d) {
    fail("dimension", "roi lo/hi must have equal length in 1.." + std::to_string(kMaxDim));
  } else {
    try {
      roi.emplace(c.roi_lo, c.roi_hi);
      if (!roi->has_integer_points()) {
        fail("roi", "region of interest contains no integer point");
        roi.reset();
      }
    } catch (const Error& e) {
      fail("roi", e.what());
    }
  }

  std::optional<RefinableFunction> phi;
  if (c.phi_orders.size() != d) {
    fail("dimension", "phi needs one order per roi axis");
  } else {
    try {
      phi.emplace(c.phi_orders);
    } catch (const Error& e) {
      fail("phi-order", e.what());
    }
  }

  std::optional<TargetFunction> target;
  try {
    if (d >= 1 && d <= kMaxDim) target.emplace(builtin_target(c.target.name, d, c.target.params));
  } catch (const Error& e) {
    fail("target", e.what());
  }
  if (target && !target->square_integrable()) {
    fail("target", "target '" + target->label() + "' is not square integrable");
  }

  if (c.level_min < 1 || c.level_max < c.level_min) {
    fail("levels", "levels must satisfy 1 <= min <= max");
  } else if (c.level_max > std::min(kMaxLevel, c.effective_level_cap())) {
    fail("levels", "level " + std::to_string(c.level_max) + " exceeds the cap " +
                       std::to_string(std::min(kMaxLevel, c.effective_level_cap())) +
                       " for d = " + std::to_string(d));
  }
  if (!(c.noise_scale >= 0.0)) fail("noise", "noise scale must be >= 0");
  if (c.cells_per_unit != 0.0 && !(c.cells_per_unit >= 2.0)) {
    fail("grid", "cells_per_unit must be >= 2 (or 0 for the default)");
  }

  // Wave description.
  const bool plane = c.wave.family == "plane";
  if (!plane && c.wave.family != "spherical") {
    fail("wave", "family must be plane or spherical");
  } else if (c.wave.design == "dyadic_plane" && !plane) {
    fail("wave", "dyadic_plane design is a plane-wave sequence");
  } else if (c.wave.design == "dyadic_spherical" && plane) {
    fail("wave", "dyadic_spherical design is a spherical-wave sequence");
  } else if (c.wave.design != "dyadic_plane" && c.wave.design != "dyadic_spherical" &&
             c.wave.design != "custom") {
    fail("wave", "design must be dyadic_plane, dyadic_spherical or custom");
  }
  if (plane && (c.wave.axis < 1 || c.wave.axis > d)) {
    fail("wave", "companion axis must be in 1.." + std::to_string(d));
  }
  if (c.wave.design == "dyadic_plane" && !(std::isfinite(c.wave.theta) && c.wave.theta != 0.0)) {
    fail("wave", "dyadic_plane theta must be finite and nonzero");
  }
  if (c.wave.design == "dyadic_spherical" && !(c.wave.epsilon > 0.0)) {
    fail("wave", "dyadic_spherical epsilon must be positive");
  }
  if (c.wave.design == "custom") {
    if (!(c.wave.amplitude > 0.0)) fail("wave", "amplitude must be positive");
    if (plane && c.wave.wavevector.size() != d) fail("wave", "wavevector needs d entries");
    if (!plane && c.wave.wavenumber == 0.0) fail("wave", "wavenumber must be nonzero");
  }

  if (!plane && roi && phi) {
    if (!zero_excluded(*roi, phi->support_extents()).excluded) {
      fail("zero-in-lattice",
           "spherical reference waves need 0 outside every lattice: no axis has "
           "2 L_min - M > 0 or L_max < 0");
    }
  }

  // Smoothness hypotheses: min{nu_2(phi), sr_phi} > varsigma > s > d/2.
  if (phi) {
    const double cap = std::min(phi->smoothness(), static_cast<double>(phi->sum_rule_order()));
    std::string orders = "(";
    for (std::size_t l = 0; l < c.phi_orders.size(); ++l) {
      orders += (l ? "," : "") + std::to_string(c.phi_orders[l]);
    }
    orders += ")";
    const double half_d = 0.5 * static_cast<double>(d);
    if (!(cap > half_d)) {
      fail("hypothesis", "d/2 < s < varsigma not satisfiable for phi orders " + orders);
    }
    if (c.s && c.varsigma) {
      if (!(*c.s > half_d)) fail("hypothesis", "s must exceed d/2");
      if (!(*c.varsigma > *c.s)) fail("hypothesis", "varsigma must exceed s");
      if (!(cap > *c.varsigma)) {
        fail("hypothesis", "min{nu_2(phi), sr_phi} must exceed varsigma for phi orders " + orders);
      }
      if (target && !(target->smoothness() > *c.varsigma)) {
        fail("hypothesis", "target smoothness nu_2(f) must exceed varsigma");
      }
    } else if (c.s || c.varsigma) {
      fail("hypothesis", "s and varsigma must be given together");
    }
  }
  return out;
}

inline void require_valid(const ExperimentConfig& c) {
  auto v = validate(c);
  if (!v.empty()) throw ConfigError(std::move(v));
}

inline WaveSequence make_wave_sequence(const ExperimentConfig& c) {
  const std::size_t d = c.dim();
  if (c.wave.design == "dyadic_plane") return WaveSequence::dyadic_plane(d, c.wave.theta);
  if (c.wave.design == "dyadic_spherical") return WaveSequence::dyadic_spherical(d, c.wave.epsilon);
  if (c.wave.family == "plane") {
    return WaveSequence::custom_plane(c.wave.amplitude, Point::from_range(c.wave.wavevector),
                                      c.wave.level_scaling);
  }
  return WaveSequence::custom_spherical(d, c.wave.amplitude, c.wave.wavenumber,
                                        c.wave.level_scaling);
}

inline StudyConfig make_study(const ExperimentConfig& c) {
  require_valid(c);
  return StudyConfig{builtin_target(c.target.name, c.dim(), c.target.params),
                     make_wave_sequence(c),
                     RefinableFunction(c.phi_orders),
                     Roi(c.roi_lo, c.roi_hi),
                     {},
                     c.level_min,
                     c.level_max,
                     c.wave.axis - 1,
                     c.cells_per_unit,
                     c.noise_scale,
                     c.seed,
                     true};
}

inline json to_json(const DecayFit& f) {
  json j = {{"points", f.points}};
  j["beta"] = f.valid() ? json(f.slope) : json(nullptr);
  j["intercept"] = f.valid() ? json(f.intercept) : json(nullptr);
  j["residual"] = f.valid() ? json(f.residual) : json(nullptr);
  return j;
}

inline void write_report_csv(std::ostream& out, const ReconstructionReport& r) {
  out << "level,lattice_size,recovery_max_error,l2_error,baseline_l2_error,gamma,certificate,"
         "sup_abs_g,skipped,max_perturbation,bound_ok,triangle_ok\n";
  for (const auto& row : r.rows) {
    out << row.level << ',' << row.lattice_size << ',' << io::format_double(row.recovery_max_error)
        << ',' << io::format_double(row.l2_error) << ',' << io::format_double(row.baseline_l2_error)
        << ',' << io::format_double(row.gamma) << ','
        << (row.certificate ? io::format_double(*row.certificate) : std::string("nan")) << ','
        << io::format_double(row.sup_abs_g) << ',' << row.skipped << ','
        << io::format_double(row.max_perturbation) << ',' << (row.bound_ok() ? 1 : 0) << ','
        << (row.triangle_ok() ? 1 : 0) << '\n';
  }
}

inline json summary_json(const ExperimentConfig& c, const ReconstructionReport& r,
                         double wall_seconds) {
  json j;
  j["schema"] = 1;
  j["config"] = to_json(c);
  j["fit"] = to_json(r.fit);
  j["baseline_fit"] = to_json(r.baseline_fit);
  j["cells_per_unit"] = r.cells_per_unit;
  j["target_norm"] = r.target_norm;
  if (c.s && c.varsigma) {
    j["analysis"] = {{"alpha", std::min(1.0, *c.varsigma - *c.s)}};
  }
  json levels = json::array();
  for (const auto& row : r.rows) {
    levels.push_back({{"level", row.level},
                      {"lattice_size", row.lattice_size},
                      {"l2_error", row.l2_error},
                      {"baseline_l2_error", row.baseline_l2_error},
                      {"recovery_max_error", row.recovery_max_error},
                      {"gamma", row.gamma},
                      {"certificate", row.certificate ? json(*row.certificate) : json(nullptr)},
                      {"sup_abs_g", row.sup_abs_g},
                      {"skipped", row.skipped},
                      {"bound_ok", row.bound_ok()},
                      {"triangle_ok", row.triangle_ok()},
                      {"seconds",
                       {{"lattice", row.timings.lattice},
                        {"admissibility", row.timings.admissibility},
                        {"sampling", row.timings.sampling},
                        {"recovery", row.timings.recovery},
                        {"synthesis", row.timings.synthesis}}}});
  }
  j["levels"] = levels;
  j["wall_seconds"] = wall_seconds;
  return j;
}

struct RunResult {
  ReconstructionReport report;
  std::vector<std::string> files;
};

/// Full pipeline: writes intensities.csv (optional), recovered.csv,
/// report.csv and summary.json into `out_dir`.
inline RunResult run(const ExperimentConfig& c, const std::filesystem::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto study = make_study(c);
  RunResult result;
  result.report = convergence_study(study);
  std::filesystem::create_directories(out_dir);
  const auto& arts = result.report.artifacts;

  if (c.write_intensities) {
    const auto path = (out_dir / "intensities.csv").string();
    auto out = io::open_output(path);
    std::vector<IntensityRecord> all;
    for (const auto& a : arts) all.insert(all.end(), a.records.begin(), a.records.end());
    io::write_intensities(out, all, study.waves.triple_variant(study.axis), c.dim());
    result.files.push_back(path);
  }
  {
    const auto path = (out_dir / "recovered.csv").string();
    auto out = io::open_output(path);
    io::write_recovered_header(out, c.dim());
    for (const auto& a : arts) io::write_recovered_rows(out, a.recovered);
    result.files.push_back(path);
  }
  {
    const auto path = (out_dir / "report.csv").string();
    auto out = io::open_output(path);
    write_report_csv(out, result.report);
    result.files.push_back(path);
  }
  {
    const auto path = (out_dir / "summary.json").string();
    auto out = io::open_output(path);
    out << summary_json(c, result.report, detail::seconds_since(t0)).dump(2) << '\n';
    result.files.push_back(path);
  }
  return result;
}

/// Recovers every level stored in a saved intensity set and writes
/// recovered.csv into `out_dir`. Waves come from the configuration.
inline std::vector<RecoveredSamples> replay(const ExperimentConfig& c,
                                            const std::string& intensities_path,
                                            const std::filesystem::path& out_dir) {
  require_valid(c);
  const auto waves = make_wave_sequence(c);
  auto in = io::open_input(intensities_path);
  const auto file = io::read_intensities(in);
  if (file.dim != c.dim()) {
    throw Error(ErrorCode::kInconsistentRecords, "intensity file dimension differs from config");
  }
  if (!(file.variant == waves.triple_variant(c.wave.axis - 1))) {
    throw Error(ErrorCode::kInconsistentRecords, "intensity file variant differs from config");
  }
  std::vector<int> levels;
  for (const auto& r : file.records) {
    if (levels.empty() || levels.back() != r.level) {
      if (std::find(levels.begin(), levels.end(), r.level) != levels.end()) {
        throw Error(ErrorCode::kInconsistentRecords, "levels must be contiguous in the file");
      }
      levels.push_back(r.level);
    }
  }
  std::vector<RecoveredSamples> out;
  for (int n : levels) out.push_back(recover_level(file.level(n), waves.at(n), n));
  std::filesystem::create_directories(out_dir);
  auto os = io::open_output((out_dir / "recovered.csv").string());
  io::write_recovered(os, out, c.dim());
  return out;
}

struct AdmissibilityRow {
  int level = 0;
  std::size_t lattice_size = 0;
  AdmissibilityReport report;
  Certificate cert;
};

/// Exact admissibility ratio versus closed-form certificate per level.
inline std::vector<AdmissibilityRow> admissibility_sweep(const ExperimentConfig& c) {
  require_valid(c);
  const auto waves = make_wave_sequence(c);
  const Roi roi(c.roi_lo, c.roi_hi);
  const auto margins = RefinableFunction(c.phi_orders).support_extents();
  std::vector<AdmissibilityRow> rows;
  for (int n = c.level_min; n <= c.level_max; ++n) {
    const auto lattice = build_lattice(roi, margins, n);
    const auto triples = build_triples(lattice, waves.triple_variant(c.wave.axis - 1));
    AdmissibilityRow row;
    row.level = n;
    row.lattice_size = lattice.size();
    row.report = admissibility_ratio(waves.at(n), triples);
    row.cert = certificate(waves, roi, margins, c.wave.axis - 1, n);
    row.report.certificate = row.cert.bound;
    rows.push_back(row);
  }
  return rows;
}

inline void write_admissibility_csv(std::ostream& out, const std::vector<AdmissibilityRow>& rows) {
  out << "level,lattice_size,ratio,certificate,sup_abs_g,distinct_ok,degenerate,certificate_note\n";
  for (const auto& r : rows) {
    out << r.level << ',' << r.lattice_size << ',' << io::format_double(r.report.ratio) << ','
        << (r.cert.bound ? io::format_double(*r.cert.bound) : std::string("nan")) << ','
        << io::format_double(r.report.sup_abs_g) << ',' << (r.report.distinct_ok ? 1 : 0) << ','
        << r.report.degenerate << ',' << '"' << r.cert.failure << '"' << '\n';
  }
}

}  // namespace holoshot
