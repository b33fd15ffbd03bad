// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "holoshot/error.hpp"
#include "holoshot/point.hpp"
#include "holoshot/refinable.hpp"

namespace holoshot {

/// Complex-valued test function with known smoothness metadata.
class TargetFunction {
 public:
  using Evaluator = std::function<std::complex<double>(const Point&)>;

  TargetFunction(std::string label, std::size_t dim, double smoothness, Evaluator eval,
                 bool square_integrable = true)
      : label_(std::move(label)),
        dim_(dim),
        smoothness_(smoothness),
        eval_(std::move(eval)),
        square_integrable_(square_integrable) {}

  const std::string& label() const noexcept { return label_; }
  std::size_t dim() const noexcept { return dim_; }
  /// nu_2(f) = sup{s : f in H^s}; +inf for smooth rapidly decaying targets.
  double smoothness() const noexcept { return smoothness_; }
  /// False for targets (constants) that are only used for point recovery.
  bool square_integrable() const noexcept { return square_integrable_; }

  std::complex<double> operator()(const Point& x) const {
    require_same_dim(dim_, x.size(), "target evaluation");
    return eval_(x);
  }

 private:
  std::string label_;
  std::size_t dim_;
  double smoothness_;
  Evaluator eval_;
  bool square_integrable_;
};

/// Parameters of the builtin targets; each target reads only its own fields.
/// Vector fields shorter than d are padded with their last entry (or 0).
struct TargetParams {
  double sigma = 1.0;                    // gaussian width
  std::vector<double> center;            // c
  std::vector<double> frequency;         // w
  double modulation = 0.5;               // rho, modulated_gaussian
  int order = 2;                         // m, bspline_bump
  double phase = 0.0;                    // theta_0
  std::complex<double> value{0.0, 0.0};  // z_0, complex_constant
};

namespace detail {

inline Point broadcast(const std::vector<double>& v, std::size_t dim) {
  Point p(dim, 0.0);
  for (std::size_t l = 0; l < dim; ++l) {
    if (!v.empty()) p[l] = l < v.size() ? v[l] : v.back();
  }
  return p;
}

}  // namespace detail

inline const std::vector<std::string_view>& builtin_target_names() {
  static const std::vector<std::string_view> names = {"gaussian_chirp", "modulated_gaussian",
                                                      "bspline_bump", "complex_constant"};
  return names;
}

/// Builtin targets:
///   gaussian_chirp      e^{-||x-c||^2/sigma^2} e^{i w.x}
///   modulated_gaussian  e^{-||x-c||^2/sigma^2} (1 + rho cos(w.x)) e^{i theta_0}
///   bspline_bump        prod_l B_m(x_l - c_l) e^{i theta_0},  nu_2 = m - 1/2
///   complex_constant    z_0 (not square integrable)
inline TargetFunction builtin_target(std::string_view name, std::size_t dim,
                                     const TargetParams& p = {}) {
  if (dim == 0 || dim > kMaxDim) throw Error(ErrorCode::kShape, "target dimension out of range");
  const double inf = std::numeric_limits<double>::infinity();
  const Point c = detail::broadcast(p.center, dim);
  const Point w = detail::broadcast(p.frequency, dim);

  if (name == "gaussian_chirp" || name == "modulated_gaussian") {
    if (!(p.sigma > 0.0)) throw Error(ErrorCode::kConfiguration, "sigma must be positive");
    const double inv_s2 = 1.0 / (p.sigma * p.sigma);
    const bool chirp = name == "gaussian_chirp";
    const double rho = p.modulation;
    const double theta0 = p.phase;
    return TargetFunction(std::string(name), dim, inf, [=](const Point& x) {
      double r2 = 0.0;
      double wx = 0.0;
      for (std::size_t l = 0; l < x.size(); ++l) {
        r2 += (x[l] - c[l]) * (x[l] - c[l]);
        wx += w[l] * x[l];
      }
      const double env = std::exp(-r2 * inv_s2);
      if (chirp) return std::polar(env, wx);
      return env * (1.0 + rho * std::cos(wx)) * std::polar(1.0, theta0);
    });
  }
  if (name == "bspline_bump") {
    const int m = p.order;
    detail::check_order(m);
    const auto rotation = std::polar(1.0, p.phase);
    return TargetFunction(std::string(name), dim, m - 0.5, [=](const Point& x) {
      double v = 1.0;
      for (std::size_t l = 0; l < x.size(); ++l) v *= eval_bspline(m, x[l] - c[l]);
      return v * rotation;
    });
  }
  if (name == "complex_constant") {
    const auto z0 = p.value;
    return TargetFunction(std::string(name), dim, inf, [=](const Point&) { return z0; }, false);
  }
  throw Error(ErrorCode::kUnknownTarget, "unknown target '" + std::string(name) + "'");
}

}  // namespace holoshot
