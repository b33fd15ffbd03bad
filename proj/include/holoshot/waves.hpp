// SPDX-License-Identifier: Apache-2.0
//
// Plane and spherical reference waves, the per-triple uniqueness determinant
// mu, the admissibility ratio over a triple set, and the closed-form
// admissibility certificates of the two designed wave sequences.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "holoshot/error.hpp"
#include "holoshot/lattice.hpp"
#include "holoshot/point.hpp"

namespace holoshot {

using Complex = std::complex<double>;

/// g(x) = a e^{i K.x}
class PlaneWave {
 public:
  PlaneWave(double amplitude, Point wavevector) : amplitude_(amplitude), wavevector_(wavevector) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
      throw Error(ErrorCode::kInvalidWave, "plane wave amplitude must be positive");
    }
  }

  double amplitude() const noexcept { return amplitude_; }
  const Point& wavevector() const noexcept { return wavevector_; }
  std::size_t dim() const noexcept { return wavevector_.size(); }

  Complex operator()(const Point& x) const {
    require_same_dim(dim(), x.size(), "plane wave evaluation");
    double phase = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l) phase += wavevector_[l] * x[l];
    return std::polar(amplitude_, phase);
  }

 private:
  double amplitude_;
  Point wavevector_;
};

/// g(x) = (a / ||x||_2) e^{i nu ||x||_2}, defined on R^d \ {0}.
class SphericalWave {
 public:
  SphericalWave(double amplitude, double wavenumber)
      : amplitude_(amplitude), wavenumber_(wavenumber) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
      throw Error(ErrorCode::kInvalidWave, "spherical wave amplitude must be positive");
    }
    if (wavenumber == 0.0 || !std::isfinite(wavenumber)) {
      throw Error(ErrorCode::kInvalidWave, "spherical wave number must be finite and nonzero");
    }
  }

  double amplitude() const noexcept { return amplitude_; }
  double wavenumber() const noexcept { return wavenumber_; }

  Complex operator()(const Point& x) const {
    const double r = norm2(x);
    if (r == 0.0) {
      throw Error(ErrorCode::kSingularPoint, "spherical wave evaluated at 0");
    }
    return std::polar(amplitude_ / r, wavenumber_ * r);
  }

 private:
  double amplitude_;
  double wavenumber_;
};

using Wave = std::variant<PlaneWave, SphericalWave>;

inline Complex eval_wave(const Wave& g, const Point& x) {
  return std::visit([&](const auto& w) { return w(x); }, g);
}

/// Reference-wave values at the three sample locations of a triple.
struct TripleValues {
  Complex base;
  Complex plus;
  Complex minus;
};

inline TripleValues eval_triple(const Wave& g, const Triple& t) {
  return {eval_wave(g, t.base.location()), eval_wave(g, t.plus.location()),
          eval_wave(g, t.minus.location())};
}

/// mu = -Im[(g(k) - g(k')) conj(g(k) - g(k''))], evaluated at 2^{-N}-scaled
/// points. Nonzero mu is equivalent to unique per-point recovery.
inline double mu(const TripleValues& v) {
  return -std::imag((v.base - v.plus) * std::conj(v.base - v.minus));
}

inline double mu(const Wave& g, const Triple& t) { return mu(eval_triple(g, t)); }

/// Default degeneracy threshold: 1e-12 max(1, |g(2^{-N}k)|^2).
inline double default_mu_tolerance(const TripleValues& v) {
  return 1e-12 * std::max(1.0, std::norm(v.base));
}

/// Per-triple conditioning factor
///   max{|g(k) - g(k')|, |g(k) - g(k'')|} / |mu|,
/// +inf when |mu| is at or below the degeneracy threshold, so a level that
/// passes here never has points the solver would reject.
inline double triple_ratio(const TripleValues& v) {
  const double m = std::abs(mu(v));
  const double num = std::max(std::abs(v.base - v.plus), std::abs(v.base - v.minus));
  if (!(m > default_mu_tolerance(v))) return std::numeric_limits<double>::infinity();
  return num / m;
}

struct AdmissibilityReport {
  int level = 0;
  double ratio = 0.0;          ///< gamma_N, max of triple_ratio over the set
  bool distinct_ok = true;     ///< g(k) != g(k') and g(k) != g(k'') everywhere
  double sup_abs_g = 0.0;      ///< max |g_N| over all sampled points
  std::size_t degenerate = 0;  ///< triples with |mu| at or below tolerance
  std::size_t worst = 0;       ///< index of the triple attaining the ratio
  std::optional<double> certificate;

  bool admissible() const { return distinct_ok && std::isfinite(ratio); }
};

inline AdmissibilityReport admissibility_ratio(const Wave& g, const TripleSet& xi) {
  if (xi.empty()) {
    throw Error(ErrorCode::kConfiguration, "admissibility needs a nonempty triple set");
  }
  AdmissibilityReport report;
  report.level = xi.level();
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const auto v = eval_triple(g, xi[i]);
    if (v.base == v.plus || v.base == v.minus) report.distinct_ok = false;
    const double r = triple_ratio(v);
    if (!std::isfinite(r)) ++report.degenerate;
    if (i == 0 || r > report.ratio) {
      report.ratio = r;
      report.worst = i;
    }
    report.sup_abs_g =
        std::max({report.sup_abs_g, std::abs(v.base), std::abs(v.plus), std::abs(v.minus)});
  }
  return report;
}

enum class WaveFamily { kPlane, kSpherical };

enum class WaveDesign {
  kDyadicPlane,      ///< plane, a_N = 1, K_N = 2^{N-2} theta pi (1,...,1)
  kDyadicSpherical,  ///< spherical, a_N = 1, nu_N = 2^N eps
  kCustom,
};

inline std::string_view to_string(WaveDesign design) {
  switch (design) {
    case WaveDesign::kDyadicPlane:
      return "dyadic_plane";
    case WaveDesign::kDyadicSpherical:
      return "dyadic_spherical";
    case WaveDesign::kCustom:
      return "custom";
  }
  return "custom";
}

/// Level-indexed family of reference waves g_N, N >= 1.
///
/// Custom plane sequences use a_N = a and K_N = 2^N K (or K when
/// level_scaling is off); custom spherical sequences use a_N = a and
/// nu_N = 2^N nu (or nu).
class WaveSequence {
 public:
  static WaveSequence dyadic_plane(std::size_t dim, double theta = 0.999) {
    WaveSequence s(WaveFamily::kPlane, WaveDesign::kDyadicPlane, dim);
    s.theta_ = theta;
    return s;
  }

  static WaveSequence dyadic_spherical(std::size_t dim, double epsilon) {
    if (!(epsilon > 0.0)) {
      throw Error(ErrorCode::kInvalidWave, "dyadic_spherical design needs epsilon > 0");
    }
    WaveSequence s(WaveFamily::kSpherical, WaveDesign::kDyadicSpherical, dim);
    s.epsilon_ = epsilon;
    return s;
  }

  static WaveSequence custom_plane(double amplitude, Point wavevector, bool level_scaling) {
    WaveSequence s(WaveFamily::kPlane, WaveDesign::kCustom, wavevector.size());
    s.amplitude_ = amplitude;
    s.wavevector_ = wavevector;
    s.level_scaling_ = level_scaling;
    PlaneWave(amplitude, wavevector);  // validates
    return s;
  }

  static WaveSequence custom_spherical(std::size_t dim, double amplitude, double wavenumber,
                                       bool level_scaling) {
    WaveSequence s(WaveFamily::kSpherical, WaveDesign::kCustom, dim);
    s.amplitude_ = amplitude;
    s.epsilon_ = wavenumber;
    s.level_scaling_ = level_scaling;
    SphericalWave(amplitude, wavenumber);  // validates
    return s;
  }

  WaveFamily family() const noexcept { return family_; }
  WaveDesign design() const noexcept { return design_; }
  std::size_t dim() const noexcept { return dim_; }
  double theta() const noexcept { return theta_; }
  double epsilon() const noexcept { return epsilon_; }

  double amplitude(int /*level*/) const {
    return design_ == WaveDesign::kCustom ? amplitude_ : 1.0;
  }

  /// Wave vector K_N of a plane sequence.
  Point wavevector(int level) const {
    if (design_ == WaveDesign::kDyadicPlane) {
      return Point(dim_, std::ldexp(theta_ * std::numbers::pi, level - 2));
    }
    Point k = wavevector_;
    if (level_scaling_) {
      for (double& v : k) v = std::ldexp(v, level);
    }
    return k;
  }

  /// Wave number nu_N of a spherical sequence.
  double wavenumber(int level) const {
    return level_scaling_ || design_ == WaveDesign::kDyadicSpherical ? std::ldexp(epsilon_, level)
                                                                     : epsilon_;
  }

  Wave at(int level) const {
    if (family_ == WaveFamily::kPlane) return PlaneWave(amplitude(level), wavevector(level));
    return SphericalWave(amplitude(level), wavenumber(level));
  }

  TripleVariant triple_variant(std::size_t axis = 0) const {
    return family_ == WaveFamily::kPlane ? TripleVariant::plane(axis) : TripleVariant::spherical();
  }

 private:
  WaveSequence(WaveFamily family, WaveDesign design, std::size_t dim)
      : family_(family), design_(design), dim_(dim) {
    if (dim == 0 || dim > kMaxDim) {
      throw Error(ErrorCode::kShape, "wave dimension out of range");
    }
  }

  WaveFamily family_;
  WaveDesign design_;
  std::size_t dim_;
  double theta_ = 0.999;
  double epsilon_ = 0.0;
  double amplitude_ = 1.0;
  Point wavevector_;
  bool level_scaling_ = true;
};

/// Closed-form admissibility bound, or the reason it cannot be certified.
struct Certificate {
  std::optional<double> bound;
  std::string failure;
  double alpha = 0.0;  ///< spherical only
  double beta = 0.0;   ///< spherical only

  bool ok() const { return bound.has_value(); }
};

/// Plane-wave certificate at level N along companion axis j0:
///   gamma = 1 / (2 a_N |sin(2^{-N} K_{j0}) sin^2(2^{-N-1} K_{j0})|),
/// with K_{j0} = 2 pi / lambda_{j0}. Fails when the sine product vanishes
/// (2^{-N} / lambda integer or half-integer).
inline Certificate plane_certificate(double amplitude, double wavenumber_j0, int level) {
  const double theta = std::ldexp(wavenumber_j0, -level);
  const double product = std::abs(std::sin(theta) * std::pow(std::sin(0.5 * theta), 2));
  Certificate c;
  if (std::abs(std::sin(theta)) < 1e-14 || std::abs(std::sin(0.5 * theta)) < 1e-14) {
    c.failure = "phase step 2^-N K is a multiple of pi: sine product vanishes";
    return c;
  }
  c.bound = 1.0 / (2.0 * amplitude * product);
  return c;
}

inline Certificate plane_certificate(const WaveSequence& seq, std::size_t axis, int level) {
  if (seq.family() != WaveFamily::kPlane) {
    throw Error(ErrorCode::kInvalidWave, "plane certificate needs a plane sequence");
  }
  const Point k = seq.wavevector(level);
  if (axis >= k.size()) throw Error(ErrorCode::kShape, "companion axis out of range");
  return plane_certificate(seq.amplitude(level), k[axis], level);
}

/// Spherical-wave certificate at level N. Checks
///   (i)  0 < alpha <= 2^{-N}|nu_N| q <= 2^{-2N}|nu_N| sqrt(d)(2^N ||Omega|| + M) <= pi/2
///   (ii) 9 sqrt(d)(2^N ||Omega|| + M) / (2^{N+3} a_N) <= beta
/// and returns beta / (sin(alpha) sin^2(alpha/2)). When alpha or beta are
/// not supplied the tightest admissible values are used.
inline Certificate spherical_certificate(const WaveSequence& seq, const Roi& roi,
                                         const std::vector<int>& margins, int level,
                                         std::optional<double> alpha = std::nullopt,
                                         std::optional<double> beta = std::nullopt) {
  if (seq.family() != WaveFamily::kSpherical) {
    throw Error(ErrorCode::kInvalidWave, "spherical certificate needs a spherical sequence");
  }
  Certificate c;
  const auto zero = zero_excluded(roi, margins);
  if (!zero.excluded) {
    c.failure = "zero not excluded from the lattice";
    return c;
  }
  const double d = static_cast<double>(roi.dim());
  const double m = static_cast<double>(*std::max_element(margins.begin(), margins.end()));
  const double nu = std::abs(seq.wavenumber(level));
  const double reach = std::ldexp(roi.norm_sup(), level) + m;
  const double alpha_max = std::ldexp(nu, -level) * zero.bound;
  const double upper = std::ldexp(nu, -2 * level) * std::sqrt(d) * reach;
  if (upper > std::numbers::pi / 2) {
    c.failure = "(i): 2^-2N |nu_N| sqrt(d)(2^N ||Omega|| + M) exceeds pi/2";
    return c;
  }
  c.alpha = alpha.value_or(alpha_max);
  if (!(c.alpha > 0.0) || c.alpha > alpha_max) {
    c.failure = "(i): alpha must satisfy 0 < alpha <= 2^-N |nu_N| q";
    return c;
  }
  const double beta_min =
      9.0 * std::sqrt(d) * reach / (std::ldexp(1.0, level + 3) * seq.amplitude(level));
  c.beta = beta.value_or(beta_min);
  if (c.beta < beta_min) {
    c.failure = "(ii): beta below 9 sqrt(d)(2^N ||Omega|| + M) / (2^{N+3} a_N)";
    return c;
  }
  c.bound = c.beta / (std::sin(c.alpha) * std::pow(std::sin(0.5 * c.alpha), 2));
  return c;
}

/// Level-independent certificate of the dyadic_spherical design (nu_N = 2^N eps, a_N = 1):
/// beta = (9/8) sqrt(d)(||Omega|| + M/2), alpha = eps q.
inline Certificate dyadic_spherical_uniform_certificate(double epsilon, const Roi& roi,
                                                        const std::vector<int>& margins) {
  Certificate c;
  const auto zero = zero_excluded(roi, margins);
  if (!zero.excluded) {
    c.failure = "zero not excluded from the lattice";
    return c;
  }
  const double d = static_cast<double>(roi.dim());
  const double m = static_cast<double>(*std::max_element(margins.begin(), margins.end()));
  const double reach = std::sqrt(d) * (roi.norm_sup() + 0.5 * m);
  if (epsilon * reach > std::numbers::pi / 2) {
    c.failure = "eps sqrt(d)(||Omega|| + M/2) exceeds pi/2";
    return c;
  }
  c.alpha = epsilon * zero.bound;
  c.beta = 9.0 / 8.0 * reach;
  c.bound = c.beta / (std::sin(c.alpha) * std::pow(std::sin(0.5 * c.alpha), 2));
  return c;
}

/// Certificate matching a sequence's family at level N.
inline Certificate certificate(const WaveSequence& seq, const Roi& roi,
                               const std::vector<int>& margins, std::size_t axis, int level) {
  if (seq.family() == WaveFamily::kPlane) return plane_certificate(seq, axis, level);
  return spherical_certificate(seq, roi, margins, level);
}

}  // namespace holoshot
