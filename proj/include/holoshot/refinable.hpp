// SPDX-License-Identifier: Apache-2.0
//
// Compactly supported nonnegative refinable functions: cardinal B-splines,
// their refinement masks, and tensor products of B-splines.
//
// The cardinal B-spline of order m is the m-fold convolution of the
// indicator of (0,1]. It satisfies the two-scale relation
//
//   B_m^(2xi) = a^(xi) B_m^(xi),   a^(xi) = ((1 + e^{-i xi}) / 2)^m,
//
// is supported on [0,m], has m sum rules and Sobolev exponent m - 1/2.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "holoshot/error.hpp"
#include "holoshot/point.hpp"

namespace holoshot {

/// Largest B-spline order accepted by the evaluator.
inline constexpr int kMaxSplineOrder = 32;

namespace detail {

inline void check_order(int m) {
  if (m < 1 || m > kMaxSplineOrder) {
    throw Error(ErrorCode::kInvalidOrder, "B-spline order must be in [1," +
                                              std::to_string(kMaxSplineOrder) + "], got " +
                                              std::to_string(m));
  }
}

}  // namespace detail

/// Evaluates the cardinal B-spline B_m at x using the two-term recursion
/// B_r(x) = (x B_{r-1}(x) + (r - x) B_{r-1}(x - 1)) / (r - 1).
/// B_1 is the indicator of (0,1]; for m >= 2 the value vanishes outside (0,m).
inline double eval_bspline(int m, double x) {
  detail::check_order(m);
  if (!(x > 0.0) || x > static_cast<double>(m)) return 0.0;
  if (m >= 2 && x == static_cast<double>(m)) return 0.0;

  // b[j] holds B_r(x - j) for the current order r.
  std::array<double, kMaxSplineOrder + 1> b{};
  for (int j = 0; j < m; ++j) {
    const double t = x - j;
    b[j] = (t > 0.0 && t <= 1.0) ? 1.0 : 0.0;
  }
  for (int r = 2; r <= m; ++r) {
    const double inv = 1.0 / (r - 1);
    for (int j = 0; j <= m - r; ++j) {
      const double t = x - j;
      b[j] = (t * b[j] + (r - t) * b[j + 1]) * inv;
    }
  }
  return b[0];
}

/// Closed-form Fourier transform of B_m: e^{-i m xi/2} (sin(xi/2)/(xi/2))^m.
inline std::complex<double> bspline_fourier(int m, double xi) {
  detail::check_order(m);
  const double half = 0.5 * xi;
  const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
  return std::pow(sinc, m) * std::exp(std::complex<double>(0.0, -m * half));
}

/// Finite refinement mask a_0..a_n with symbol a^(xi) = sum_k a_k e^{-ik xi}.
class Mask1D {
 public:
  explicit Mask1D(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty()) {
      throw Error(ErrorCode::kInvalidMask, "mask must be nonempty");
    }
    double sum = 0.0;
    double abs_sum = 0.0;
    for (double a : coefficients_) {
      if (!std::isfinite(a)) {
        throw Error(ErrorCode::kInvalidMask, "mask coefficients must be finite");
      }
      sum += a;
      abs_sum += std::abs(a);
    }
    if (std::abs(sum - 1.0) > 1e-12 * std::max(1.0, abs_sum)) {
      throw Error(ErrorCode::kInvalidMask,
                  "mask coefficients must sum to 1 (symbol normalized at 0)");
    }
  }

  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  std::size_t size() const noexcept { return coefficients_.size(); }
  double operator[](std::size_t k) const noexcept { return coefficients_[k]; }

  std::complex<double> symbol(double xi) const {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t k = 0; k < coefficients_.size(); ++k) {
      s += coefficients_[k] * std::polar(1.0, -static_cast<double>(k) * xi);
    }
    return s;
  }

  friend bool operator==(const Mask1D&, const Mask1D&) = default;

 private:
  std::vector<double> coefficients_;
};

/// Mask of B_m: binomial(m,k) / 2^m for k = 0..m.
inline Mask1D bspline_mask(int m) {
  detail::check_order(m);
  std::vector<double> a(static_cast<std::size_t>(m) + 1);
  double binom = 1.0;
  const double scale = std::ldexp(1.0, -m);
  for (int k = 0; k <= m; ++k) {
    a[k] = binom * scale;
    binom = binom * (m - k) / (k + 1);
  }
  return Mask1D(std::move(a));
}

/// Discrete convolution; the symbol of the result is the product of symbols.
inline Mask1D convolve_masks(const Mask1D& a, const Mask1D& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return Mask1D(std::move(c));
}

/// Number of sum rules: the largest r such that the derivatives of orders
/// 0..r-1 of the mask symbol vanish at pi (magnitude below `tol`).
///
/// Derivatives are taken analytically. Indices are centered at n/2 before
/// differentiating; this multiplies the symbol by a unimodular factor that
/// leaves the zero order at pi unchanged but keeps the powers k^j small.
inline int sum_rule_order(const Mask1D& mask, double tol = 1e-9) {
  const auto& a = mask.coefficients();
  const double center = 0.5 * static_cast<double>(a.size() - 1);
  int order = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    std::complex<double> deriv{0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double t = static_cast<double>(k) - center;
      // (-i t)^j e^{-i t pi}
      const std::complex<double> factor =
          std::pow(std::complex<double>(0.0, -t), static_cast<int>(j)) *
          std::polar(1.0, -t * std::numbers::pi);
      deriv += a[k] * factor;
    }
    if (std::abs(deriv) >= tol) break;
    ++order;
  }
  return order;
}

/// Positivity condition for refinable masks of length n+1 >= 3: every
/// coefficient strictly positive and both even- and odd-indexed sums 1/2.
inline bool check_nonnegativity_condition(const Mask1D& mask) {
  const auto& a = mask.coefficients();
  if (a.size() < 3) return false;
  double even = 0.0;
  double odd = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a[k] > 0.0)) return false;
    (k % 2 == 0 ? even : odd) += a[k];
  }
  return std::abs(even - 0.5) <= 1e-12 && std::abs(odd - 0.5) <= 1e-12;
}

/// Tensor product of cardinal B-splines, phi(x) = prod_l B_{m_l}(x_l).
class RefinableFunction {
 public:
  explicit RefinableFunction(std::vector<int> orders) : orders_(std::move(orders)) {
    if (orders_.empty() || orders_.size() > kMaxDim) {
      throw Error(ErrorCode::kShape,
                  "refinable function needs 1.." + std::to_string(kMaxDim) + " axes");
    }
    for (int m : orders_) detail::check_order(m);
  }

  /// Builds phi from per-axis masks. Only B-spline (binomial) masks are
  /// accepted, since those are the masks with a pointwise evaluator.
  static RefinableFunction from_masks(const std::vector<Mask1D>& masks) {
    std::vector<int> orders;
    for (const auto& mask : masks) {
      const int m = static_cast<int>(mask.size()) - 1;
      bool binomial = m >= 1 && m <= kMaxSplineOrder;
      if (binomial) {
        const auto ref = bspline_mask(m);
        for (std::size_t k = 0; k < mask.size(); ++k) {
          binomial = binomial && std::abs(ref[k] - mask[k]) <= 1e-14;
        }
      }
      if (!binomial) {
        throw Error(ErrorCode::kInvalidMask,
                    "pointwise evaluation is only available for B-spline "
                    "masks");
      }
      orders.push_back(m);
    }
    return RefinableFunction(std::move(orders));
  }

  std::size_t dim() const noexcept { return orders_.size(); }
  const std::vector<int>& orders() const noexcept { return orders_; }

  /// Support extent M_l; supp(phi) = [0,M_1] x ... x [0,M_d].
  int support(std::size_t axis) const { return orders_.at(axis); }
  std::vector<int> support_extents() const { return orders_; }

  int sum_rule_order() const { return *std::min_element(orders_.begin(), orders_.end()); }

  /// Sobolev smoothness exponent nu_2(phi) = min_l m_l - 1/2.
  double smoothness() const { return sum_rule_order() - 0.5; }

  Mask1D axis_mask(std::size_t axis) const { return bspline_mask(orders_.at(axis)); }

  double operator()(const Point& x) const {
    require_same_dim(dim(), x.size(), "refinable evaluation");
    double v = 1.0;
    for (std::size_t l = 0; l < orders_.size() && v != 0.0; ++l) {
      v *= eval_bspline(orders_[l], x[l]);
    }
    return v;
  }

  std::string label() const {
    std::string s;
    for (std::size_t l = 0; l < orders_.size(); ++l) {
      if (l) s += "x";
      s += "B" + std::to_string(orders_[l]);
    }
    return s;
  }

 private:
  std::vector<int> orders_;
};

inline double eval_refinable(const RefinableFunction& phi, const Point& x) { return phi(x); }

/// |sum_{k in Z^d} phi(x - k) - 1|, summed over the shifts whose support
/// contains x.
inline double unit_partition_residual(const RefinableFunction& phi, const Point& x) {
  require_same_dim(phi.dim(), x.size(), "unit partition residual");
  const std::size_t d = phi.dim();
  // Per-axis sums factor: sum_k prod_l B(x_l - k_l) = prod_l sum_k B(x_l - k_l).
  double product = 1.0;
  for (std::size_t l = 0; l < d; ++l) {
    const int m = phi.support(l);
    const auto lo = static_cast<std::int64_t>(std::floor(x[l])) - m;
    const auto hi = static_cast<std::int64_t>(std::ceil(x[l]));
    double axis_sum = 0.0;
    for (auto k = lo; k <= hi; ++k) {
      axis_sum += eval_bspline(m, x[l] - static_cast<double>(k));
    }
    product *= axis_sum;
  }
  return std::abs(product - 1.0);
}

}  // namespace holoshot
