// SPDX-License-Identifier: Apache-2.0
//
// Level-N synthesis  f(x) ~ sum_{k in Lambda} f°(2^{-N}k) phi(2^N x - k),
// L2 error on the region of interest, and multi-level convergence studies.
#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "holoshot/lattice.hpp"
#include "holoshot/measure.hpp"
#include "holoshot/recover.hpp"
#include "holoshot/refinable.hpp"
#include "holoshot/targets.hpp"
#include "holoshot/waves.hpp"

namespace holoshot {

struct SynthesisStats {
  std::size_t coefficients_touched = 0;
};

namespace detail {

/// Indices k along one axis with B_m(t - k) possibly nonzero, and weights.
struct AxisStencil {
  std::int64_t first = 0;
  std::array<double, kMaxSplineOrder> weights{};
};

inline AxisStencil axis_stencil(int m, double t) {
  AxisStencil s;
  // The m candidates are k = ceil(t) - m .. ceil(t) - 1, so t - k lies in (0, m].
  const auto top = static_cast<std::int64_t>(std::ceil(t));
  s.first = top - m;
  for (int j = 0; j < m; ++j) {
    s.weights[j] = eval_bspline(m, t - static_cast<double>(s.first + j));
  }
  return s;
}

inline Complex combine(const RecoveredSamples& samples, const RefinableFunction& phi,
                       const std::array<const AxisStencil*, kMaxDim>& stencils,
                       SynthesisStats* stats) {
  const std::size_t d = phi.dim();
  std::array<int, kMaxDim> m{};
  std::size_t total = 1;
  for (std::size_t l = 0; l < d; ++l) {
    m[l] = phi.support(l);
    total *= static_cast<std::size_t>(m[l]);
  }
  Complex sum{0.0, 0.0};
  Index k(d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    double w = 1.0;
    for (std::size_t l = d; l-- > 0;) {
      const auto j = static_cast<int>(rest % static_cast<std::size_t>(m[l]));
      rest /= static_cast<std::size_t>(m[l]);
      k[l] = stencils[l]->first + j;
      w *= stencils[l]->weights[j];
    }
    if (stats) ++stats->coefficients_touched;
    if (w != 0.0) sum += w * samples.value(k);
  }
  return sum;
}

/// Pairwise summation with a fixed tree shape.
template <typename T>
T pairwise_sum(std::span<const T> v) {
  if (v.size() <= 8) {
    T s{};
    for (const auto& x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace detail

/// sum_k samples(k) phi(2^N x - k) over the prod_l M_l indices whose shifted
/// support contains 2^N x. Invalid or missing coefficients count as 0.
inline Complex synthesize(const RecoveredSamples& samples, const RefinableFunction& phi,
                          const Point& x, SynthesisStats* stats = nullptr) {
  require_same_dim(phi.dim(), x.size(), "synthesis point");
  if (!samples.empty()) require_same_dim(phi.dim(), samples.dim(), "synthesis samples");
  std::array<detail::AxisStencil, kMaxDim> st{};
  std::array<const detail::AxisStencil*, kMaxDim> ptr{};
  for (std::size_t l = 0; l < phi.dim(); ++l) {
    st[l] = detail::axis_stencil(phi.support(l), std::ldexp(x[l], samples.level()));
    ptr[l] = &st[l];
  }
  return detail::combine(samples, phi, ptr, stats);
}

/// Exact N-level data f(2^{-N}k) on a lattice.
inline RecoveredSamples exact_samples(const TargetFunction& f, const LatticeSet& lattice) {
  RecoveredSamples out(lattice.level(), lattice.lo(), lattice.hi());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const Index k = lattice.at(i);
    DyadicPoint p{k, lattice.level()};
    out.set(k, f(p.location()), std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

/// Composite midpoint quadrature grid over a box: ceil(cells_per_unit * width)
/// cells per axis (at least 2).
class MidpointGrid {
 public:
  MidpointGrid(const Roi& roi, double cells_per_unit) : roi_(roi) {
    if (!(cells_per_unit >= 2.0)) {
      throw Error(ErrorCode::kConfiguration, "quadrature needs >= 2 cells per unit");
    }
    for (std::size_t l = 0; l < roi.dim(); ++l) {
      const double width = roi.hi(l) - roi.lo(l);
      const auto n = std::max<std::size_t>(
          2, static_cast<std::size_t>(std::ceil(cells_per_unit * width - 1e-9)));
      cells_[l] = n;
      step_[l] = width / static_cast<double>(n);
    }
  }

  std::size_t dim() const { return roi_.dim(); }
  std::size_t cells(std::size_t l) const { return cells_[l]; }
  double step(std::size_t l) const { return step_[l]; }
  double node(std::size_t l, std::size_t i) const {
    return roi_.lo(l) + (static_cast<double>(i) + 0.5) * step_[l];
  }
  double cell_volume() const {
    double v = 1.0;
    for (std::size_t l = 0; l < dim(); ++l) v *= step_[l];
    return v;
  }

  /// Integral of integrand(x) over the box; rows along the last axis are
  /// reduced pairwise, then the row sums are reduced pairwise.
  template <typename Fn>
  double integrate(Fn&& integrand) const {
    const std::size_t d = dim();
    const std::size_t row = cells_[d - 1];
    std::size_t rows = 1;
    for (std::size_t l = 0; l + 1 < d; ++l) rows *= cells_[l];
    std::vector<double> row_values(row);
    std::vector<double> row_sums(rows);
    std::array<std::size_t, kMaxDim> idx{};
    for (std::size_t r = 0; r < rows; ++r) {
      std::size_t rest = r;
      for (std::size_t l = d - 1; l-- > 0;) {
        idx[l] = rest % cells_[l];
        rest /= cells_[l];
      }
      for (std::size_t i = 0; i < row; ++i) {
        idx[d - 1] = i;
        row_values[i] = integrand(idx);
      }
      row_sums[r] = detail::pairwise_sum(std::span<const double>(row_values));
    }
    return detail::pairwise_sum(std::span<const double>(row_sums)) * cell_volume();
  }

 private:
  Roi roi_;
  std::array<std::size_t, kMaxDim> cells_{};
  std::array<double, kMaxDim> step_{};
};

/// L2(Omega) norm of f by midpoint quadrature.
inline double l2_norm(const TargetFunction& f, const Roi& roi, double cells_per_unit) {
  MidpointGrid grid(roi, cells_per_unit);
  Point x(roi.dim());
  return std::sqrt(grid.integrate([&](const std::array<std::size_t, kMaxDim>& idx) {
    for (std::size_t l = 0; l < roi.dim(); ++l) x[l] = grid.node(l, idx[l]);
    return std::norm(f(x));
  }));
}

/// ||(f - sum_k samples(k) phi(2^N . - k))|_Omega||_{L2} by composite midpoint
/// quadrature; deterministic for a fixed grid.
inline double l2_error(const TargetFunction& f, const RecoveredSamples& samples,
                       const RefinableFunction& phi, const Roi& roi, double cells_per_unit) {
  require_same_dim(phi.dim(), roi.dim(), "l2 error roi");
  MidpointGrid grid(roi, cells_per_unit);
  const std::size_t d = roi.dim();
  // Stencils depend on one coordinate only: precompute per axis.
  std::array<std::vector<detail::AxisStencil>, kMaxDim> stencils;
  for (std::size_t l = 0; l < d; ++l) {
    stencils[l].resize(grid.cells(l));
    for (std::size_t i = 0; i < grid.cells(l); ++i) {
      stencils[l][i] =
          detail::axis_stencil(phi.support(l), std::ldexp(grid.node(l, i), samples.level()));
    }
  }
  Point x(d);
  std::array<const detail::AxisStencil*, kMaxDim> ptr{};
  const double sq = grid.integrate([&](const std::array<std::size_t, kMaxDim>& idx) {
    for (std::size_t l = 0; l < d; ++l) {
      x[l] = grid.node(l, idx[l]);
      ptr[l] = &stencils[l][idx[l]];
    }
    const Complex s = samples.empty() ? Complex{} : detail::combine(samples, phi, ptr, nullptr);
    return std::norm(f(x) - s);
  });
  return std::sqrt(sq);
}

/// Least-squares fit log2(error) = -slope N + intercept.
struct DecayFit {
  double slope = std::numeric_limits<double>::quiet_NaN();  ///< fitted beta
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();  ///< RMS of log2 residuals
  std::size_t points = 0;

  bool valid() const { return points >= 2 && std::isfinite(slope); }
};

/// Errors below `floor` are excluded from the fit.
inline DecayFit fit_decay(std::span<const int> levels, std::span<const double> errors,
                          double floor = 0.0) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < levels.size() && i < errors.size(); ++i) {
    if (errors[i] > floor && std::isfinite(errors[i]) && errors[i] > 0.0) {
      xs.push_back(levels[i]);
      ys.push_back(std::log2(errors[i]));
    }
  }
  DecayFit fit;
  fit.points = xs.size();
  if (xs.size() < 2) return fit;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double b = sxy / sxx;
  fit.slope = -b;
  fit.intercept = my - b * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + b * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

struct StudyConfig {
  TargetFunction target;
  WaveSequence waves;
  RefinableFunction phi;
  Roi roi;
  std::vector<int> margins;  ///< empty: support extents of phi
  int level_min = 2;
  int level_max = 7;
  std::size_t axis = 0;         ///< plane companion axis j0 (0-based)
  double cells_per_unit = 0.0;  ///< 0: 2^{level_max + 4}
  double noise_scale = 0.0;
  std::uint64_t seed = 0;
  bool keep_artifacts = false;

  std::vector<int> effective_margins() const {
    return margins.empty() ? phi.support_extents() : margins;
  }
  double effective_cells() const {
    return cells_per_unit > 0.0 ? cells_per_unit : std::ldexp(1.0, level_max + 4);
  }
};

struct StageTimings {
  double lattice = 0.0;
  double admissibility = 0.0;
  double sampling = 0.0;
  double recovery = 0.0;
  double synthesis = 0.0;
};

struct LevelRow {
  int level = 0;
  std::size_t lattice_size = 0;
  double recovery_max_error = 0.0;  ///< max_k |f(2^{-N}k) - f°(2^{-N}k)|
  double l2_error = 0.0;            ///< pipeline
  double baseline_l2_error = 0.0;   ///< exact samples
  double gamma = 0.0;               ///< exact admissibility ratio
  std::optional<double> certificate;
  double sup_abs_g = 0.0;
  std::size_t skipped = 0;
  double max_perturbation = 0.0;  ///< max_k ||(d_k' - d_k, d_k'' - d_k)||_2, d = I - A
  double bound_slack = 0.0;       ///< min_k (gamma pert_k + 1e-10 - |f - f°|)
  double triangle_slack = 0.0;    ///< baseline + sup|f - f°| vol^{1/2} + 1e-6 - pipeline
  StageTimings timings;

  bool bound_ok() const { return bound_slack >= 0.0; }
  bool triangle_ok() const { return triangle_slack >= 0.0; }
};

struct LevelArtifacts {
  int level = 0;
  std::vector<IntensityRecord> records;
  RecoveredSamples recovered;
};

struct ReconstructionReport {
  std::vector<LevelRow> rows;
  DecayFit fit;           ///< pipeline L2 errors
  DecayFit baseline_fit;  ///< exact-sample L2 errors
  double cells_per_unit = 0.0;
  double target_norm = 0.0;
  std::vector<LevelArtifacts> artifacts;

  std::vector<int> levels() const {
    std::vector<int> out;
    for (const auto& r : rows) out.push_back(r.level);
    return out;
  }
  std::vector<double> l2_errors() const {
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r.l2_error);
    return out;
  }
  std::vector<double> baseline_errors() const {
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r.baseline_l2_error);
    return out;
  }
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Runs one level of the pipeline: lattice and triples, admissibility,
/// intensities, recovery, synthesis error, and the exact-sample baseline.
inline LevelRow run_level(const StudyConfig& cfg, int level, LevelArtifacts* artifacts = nullptr) {
  using clock = std::chrono::steady_clock;
  const auto margins = cfg.effective_margins();
  const double cells = cfg.effective_cells();
  LevelRow row;
  row.level = level;

  auto t0 = clock::now();
  const auto lattice = build_lattice(cfg.roi, margins, level);
  const auto triples = build_triples(lattice, cfg.waves.triple_variant(cfg.axis));
  row.lattice_size = lattice.size();
  row.timings.lattice = detail::seconds_since(t0);

  t0 = clock::now();
  const Wave g = cfg.waves.at(level);
  const auto adm = admissibility_ratio(g, triples);
  if (!adm.admissible()) {
    throw Error(ErrorCode::kInadmissible, "reference wave inadmissible at level " +
                                              std::to_string(level) +
                                              ", triple k = " + to_string(triples[adm.worst].k));
  }
  row.gamma = adm.ratio;
  row.sup_abs_g = adm.sup_abs_g;
  row.certificate = certificate(cfg.waves, cfg.roi, margins, cfg.axis, level).bound;
  row.timings.admissibility = detail::seconds_since(t0);

  t0 = clock::now();
  auto records = sample_intensities(cfg.target, g, triples);
  if (cfg.noise_scale > 0.0) {
    records = perturb_intensities(std::move(records), cfg.noise_scale,
                                  cfg.seed + static_cast<std::uint64_t>(level));
  }
  row.timings.sampling = detail::seconds_since(t0);

  t0 = clock::now();
  auto recovered = recover_level(records, g, level);
  row.skipped = recovered.skipped();
  row.bound_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    const Complex truth = cfg.target(r.triple.base.location());
    const double err = recovered.valid(r.triple.k) ? std::abs(truth - recovered.value(r.triple.k))
                                                   : std::abs(truth);
    row.recovery_max_error = std::max(row.recovery_max_error, err);
    const auto [ap, am] = quasi_intensities(cfg.target, g, r.triple);
    const double base_dev = r.base - std::norm(truth + eval_wave(g, r.triple.base.location()));
    const double pert = std::hypot(r.plus - ap - base_dev, r.minus - am - base_dev);
    row.max_perturbation = std::max(row.max_perturbation, pert);
    if (recovered.valid(r.triple.k)) {
      row.bound_slack = std::min(row.bound_slack, row.gamma * pert + 1e-10 - err);
    }
  }
  row.timings.recovery = detail::seconds_since(t0);

  t0 = clock::now();
  row.l2_error = l2_error(cfg.target, recovered, cfg.phi, cfg.roi, cells);
  row.baseline_l2_error =
      l2_error(cfg.target, exact_samples(cfg.target, lattice), cfg.phi, cfg.roi, cells);
  row.triangle_slack = row.baseline_l2_error +
                       row.recovery_max_error * std::sqrt(cfg.roi.volume()) + 1e-6 - row.l2_error;
  row.timings.synthesis = detail::seconds_since(t0);

  if (artifacts) {
    artifacts->level = level;
    artifacts->records = std::move(records);
    artifacts->recovered = std::move(recovered);
  }
  return row;
}

/// Multi-level study: one row per level in [level_min, level_max], plus
/// least-squares decay fits of the pipeline and baseline L2 errors.
/// Throws kInadmissible naming the offending level and triple.
inline ReconstructionReport convergence_study(const StudyConfig& cfg) {
  require_same_dim(cfg.roi.dim(), cfg.phi.dim(), "study refinable function");
  require_same_dim(cfg.roi.dim(), cfg.target.dim(), "study target");
  require_same_dim(cfg.roi.dim(), cfg.waves.dim(), "study wave sequence");
  if (cfg.level_min < 1 || cfg.level_max < cfg.level_min) {
    throw Error(ErrorCode::kConfiguration, "study levels must satisfy 1 <= min <= max");
  }
  check_level(cfg.level_max);

  ReconstructionReport report;
  report.cells_per_unit = cfg.effective_cells();
  report.target_norm =
      cfg.target.square_integrable() ? l2_norm(cfg.target, cfg.roi, report.cells_per_unit) : 0.0;
  for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
    LevelArtifacts art;
    report.rows.push_back(run_level(cfg, level, cfg.keep_artifacts ? &art : nullptr));
    if (cfg.keep_artifacts) report.artifacts.push_back(std::move(art));
  }
  const double floor = 1e-12 * report.target_norm;
  const auto levels = report.levels();
  const auto errs = report.l2_errors();
  const auto base = report.baseline_errors();
  report.fit = fit_decay(levels, errs, floor);
  report.baseline_fit = fit_decay(levels, base, floor);
  return report;
}

}  // namespace holoshot
