// SPDX-License-Identifier: Apache-2.0
//
// Per-point recovery of f(2^{-N}k) from three interference intensities.
//
// With c + i d = g(k) - g(k') and h + i e = g(k) - g(k'') (all at 2^{-N}
// scaled locations) and mu = c e - d h, the recovered value solves
//
//   [Re]       1    [ e  -d ] [ I_k - I_k'  + |g(k')|^2  - |g(k)|^2 ]
//   [Im] =  ------- [-h   c ] [ I_k - I_k'' + |g(k'')|^2 - |g(k)|^2 ]
//            2 mu
//
// The same formula serves plane and spherical reference waves.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "holoshot/error.hpp"
#include "holoshot/lattice.hpp"
#include "holoshot/measure.hpp"
#include "holoshot/waves.hpp"

namespace holoshot {

struct SolveCoefficients {
  double c = 0.0;
  double d = 0.0;
  double h = 0.0;
  double e = 0.0;
  double mu = 0.0;
};

inline SolveCoefficients solve_coefficients(const TripleValues& v) {
  const Complex dp = v.base - v.plus;
  const Complex dm = v.base - v.minus;
  SolveCoefficients s{dp.real(), dp.imag(), dm.real(), dm.imag(), 0.0};
  s.mu = s.c * s.e - s.d * s.h;
  return s;
}

/// Recovered value from precomputed wave values; throws kDegeneratePoint
/// when |mu| <= tol.
inline Complex solve_point(const TripleValues& v, double i_base, double i_plus, double i_minus,
                           double tol) {
  const auto s = solve_coefficients(v);
  if (!(std::abs(s.mu) > tol)) {
    throw Error(ErrorCode::kDegeneratePoint,
                "degenerate recovery point: |mu| = " + std::to_string(std::abs(s.mu)));
  }
  const double g0 = std::norm(v.base);
  const double r1 = i_base - i_plus + std::norm(v.plus) - g0;
  const double r2 = i_base - i_minus + std::norm(v.minus) - g0;
  const double scale = 1.0 / (2.0 * s.mu);
  return {scale * (s.e * r1 - s.d * r2), scale * (-s.h * r1 + s.c * r2)};
}

inline Complex solve_point(const Wave& g, const Triple& t, double i_base, double i_plus,
                           double i_minus) {
  const auto v = eval_triple(g, t);
  try {
    return solve_point(v, i_base, i_plus, i_minus, default_mu_tolerance(v));
  } catch (const Error& err) {
    throw Error(err.code(), std::string(err.what()) + " at k = " + to_string(t.k));
  }
}

inline Complex solve_point(const Wave& g, const IntensityRecord& r) {
  return solve_point(g, r.triple, r.base, r.plus, r.minus);
}

/// Dense map k -> f°(2^{-N}k) over an integer box of indices. Entries never
/// recovered (missing or degenerate) are invalid and synthesize as 0.
class RecoveredSamples {
 public:
  RecoveredSamples() = default;

  RecoveredSamples(int level, Index lo, Index hi)
      : level_(level), box_(level, lo, hi, std::vector<int>(lo.size(), 1)) {
    if (lo.empty()) return;
    const std::size_t n = box_.size();
    values_.assign(n, Complex{0.0, 0.0});
    mu_.assign(n, 0.0);
    valid_.assign(n, 0);
  }

  int level() const noexcept { return level_; }
  std::size_t dim() const noexcept { return box_.dim(); }
  bool empty() const noexcept { return values_.empty(); }
  const Index& lo() const noexcept { return box_.lo(); }
  const Index& hi() const noexcept { return box_.hi(); }
  std::size_t capacity() const noexcept { return values_.size(); }
  std::size_t skipped() const noexcept { return skipped_; }

  std::size_t recovered() const {
    return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), 1));
  }

  bool contains(const Index& k) const { return !empty() && box_.contains(k); }

  /// Value at k; 0 outside the box or at invalid entries.
  Complex value(const Index& k) const {
    if (!contains(k)) return {0.0, 0.0};
    return values_[box_.linear_index(k)];
  }

  bool valid(const Index& k) const { return contains(k) && valid_[box_.linear_index(k)] != 0; }

  double mu(const Index& k) const { return contains(k) ? mu_[box_.linear_index(k)] : 0.0; }

  void set(const Index& k, Complex value, double mu) {
    const auto i = box_.linear_index(k);
    values_[i] = value;
    mu_[i] = mu;
    valid_[i] = 1;
  }

  void mark_skipped(const Index& k, double mu) {
    const auto i = box_.linear_index(k);
    values_[i] = {0.0, 0.0};
    mu_[i] = mu;
    valid_[i] = 0;
    ++skipped_;
  }

  /// Indices in row-major order.
  Index at(std::size_t linear) const { return box_.at(linear); }
  std::size_t linear_index(const Index& k) const { return box_.linear_index(k); }
  Complex value_at(std::size_t linear) const { return values_[linear]; }
  bool valid_at(std::size_t linear) const { return valid_[linear] != 0; }
  double mu_at(std::size_t linear) const { return mu_[linear]; }

 private:
  int level_ = 0;
  LatticeSet box_{0, Index{}, Index{}, {}};
  std::vector<Complex> values_;
  std::vector<double> mu_;
  std::vector<char> valid_;
  std::size_t skipped_ = 0;
};

/// Solves every record of one level. Degenerate points are recorded as
/// skipped (coefficient 0) instead of aborting.
inline RecoveredSamples recover_level(const std::vector<IntensityRecord>& records, const Wave& g,
                                      int level) {
  if (records.empty()) return RecoveredSamples(level, Index{}, Index{});
  const std::size_t dim = records.front().triple.k.size();
  Index lo = records.front().triple.k;
  Index hi = lo;
  for (const auto& r : records) {
    if (r.level != level) {
      throw Error(ErrorCode::kInconsistentRecords, "record at level " + std::to_string(r.level) +
                                                       " in a level-" + std::to_string(level) +
                                                       " recovery");
    }
    require_same_dim(dim, r.triple.k.size(), "intensity record");
    for (std::size_t l = 0; l < dim; ++l) {
      lo[l] = std::min(lo[l], r.triple.k[l]);
      hi[l] = std::max(hi[l], r.triple.k[l]);
    }
  }
  RecoveredSamples out(level, lo, hi);
  for (const auto& r : records) {
    const auto v = eval_triple(g, r.triple);
    const double m = mu(v);
    if (!(std::abs(m) > default_mu_tolerance(v))) {
      out.mark_skipped(r.triple.k, m);
      continue;
    }
    out.set(r.triple.k, solve_point(v, r.base, r.plus, r.minus, default_mu_tolerance(v)), m);
  }
  return out;
}

}  // namespace holoshot
