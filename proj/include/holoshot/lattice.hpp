// SPDX-License-Identifier: Apache-2.0
//
// Sample index sets for level-N recovery on a box-shaped region of interest.
//
// For a region Omega with integer points Z^d ∩ Omega, let L_{l,min} and
// L_{l,max} be the extreme integer coordinates along axis l. The level-N
// lattice is the integer box
//
//   2^N L_{l,min} - M_l <= k_l <= 2^N L_{l,max},   l = 1..d,
//
// where M_l is the support extent of the refinable function along axis l.
// Each lattice point k is paired with two companions k', k'' close to k,
// giving the triples that drive single-shot recovery.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holoshot/error.hpp"
#include "holoshot/point.hpp"

namespace holoshot {

/// Largest level accepted anywhere in the library. Spherical companions use
/// denominators 2^{2N}, which must stay exact in a double.
inline constexpr int kMaxLevel = 26;

inline void check_level(int level) {
  if (level < 0 || level > kMaxLevel) {
    throw Error(ErrorCode::kConfiguration, "level must be in [0," + std::to_string(kMaxLevel) +
                                               "], got " + std::to_string(level));
  }
}

/// Axis-aligned box region of interest.
class Roi {
 public:
  Roi(std::vector<double> lo, std::vector<double> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.empty() || lo_.size() != hi_.size() || lo_.size() > kMaxDim) {
      throw Error(ErrorCode::kShape,
                  "roi bounds must have equal dimension in 1.." + std::to_string(kMaxDim));
    }
    for (std::size_t l = 0; l < lo_.size(); ++l) {
      if (!(lo_[l] < hi_[l]) || !std::isfinite(lo_[l]) || !std::isfinite(hi_[l])) {
        throw Error(ErrorCode::kConfiguration,
                    "roi axis " + std::to_string(l + 1) + " needs lo < hi");
      }
    }
  }

  std::size_t dim() const noexcept { return lo_.size(); }
  double lo(std::size_t l) const { return lo_.at(l); }
  double hi(std::size_t l) const { return hi_.at(l); }
  const std::vector<double>& lo() const noexcept { return lo_; }
  const std::vector<double>& hi() const noexcept { return hi_; }

  double volume() const {
    double v = 1.0;
    for (std::size_t l = 0; l < dim(); ++l) v *= hi_[l] - lo_[l];
    return v;
  }

  /// sup of ||x||_2 over the box (attained at a corner).
  double norm_sup() const {
    double s = 0.0;
    for (std::size_t l = 0; l < dim(); ++l) {
      const double c = std::max(std::abs(lo_[l]), std::abs(hi_[l]));
      s += c * c;
    }
    return std::sqrt(s);
  }

  bool contains(const Point& x) const {
    for (std::size_t l = 0; l < dim(); ++l) {
      if (x[l] < lo_[l] || x[l] > hi_[l]) return false;
    }
    return true;
  }

  /// Smallest integer coordinate of Z^d ∩ Omega along axis l.
  std::int64_t integer_min(std::size_t l) const {
    check_integer_points();
    return static_cast<std::int64_t>(std::ceil(lo_.at(l)));
  }

  /// Largest integer coordinate of Z^d ∩ Omega along axis l.
  std::int64_t integer_max(std::size_t l) const {
    check_integer_points();
    return static_cast<std::int64_t>(std::floor(hi_.at(l)));
  }

  bool has_integer_points() const {
    for (std::size_t l = 0; l < dim(); ++l) {
      if (std::ceil(lo_[l]) > std::floor(hi_[l])) return false;
    }
    return true;
  }

 private:
  void check_integer_points() const {
    if (!has_integer_points()) {
      throw Error(ErrorCode::kConfiguration, "region of interest contains no integer point");
    }
  }

  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// Integer box of level-N sample indices. Points are enumerated in
/// row-major order (last axis fastest).
class LatticeSet {
 public:
  LatticeSet(int level, Index lo, Index hi, std::vector<int> margins)
      : level_(level), lo_(lo), hi_(hi), margins_(std::move(margins)) {}

  int level() const noexcept { return level_; }
  std::size_t dim() const noexcept { return lo_.size(); }
  const Index& lo() const noexcept { return lo_; }
  const Index& hi() const noexcept { return hi_; }
  const std::vector<int>& margins() const noexcept { return margins_; }

  std::int64_t extent(std::size_t l) const { return hi_[l] - lo_[l] + 1; }

  std::size_t size() const {
    std::size_t n = 1;
    for (std::size_t l = 0; l < dim(); ++l) n *= static_cast<std::size_t>(extent(l));
    return n;
  }

  bool contains(const Index& k) const {
    if (k.size() != dim()) return false;
    for (std::size_t l = 0; l < dim(); ++l) {
      if (k[l] < lo_[l] || k[l] > hi_[l]) return false;
    }
    return true;
  }

  std::size_t linear_index(const Index& k) const {
    std::size_t idx = 0;
    for (std::size_t l = 0; l < dim(); ++l) {
      idx = idx * static_cast<std::size_t>(extent(l)) + static_cast<std::size_t>(k[l] - lo_[l]);
    }
    return idx;
  }

  Index at(std::size_t linear) const {
    Index k(dim());
    for (std::size_t l = dim(); l-- > 0;) {
      const auto e = static_cast<std::size_t>(extent(l));
      k[l] = lo_[l] + static_cast<std::int64_t>(linear % e);
      linear /= e;
    }
    return k;
  }

  std::vector<Index> points() const {
    std::vector<Index> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i));
    return out;
  }

 private:
  int level_;
  Index lo_;
  Index hi_;
  std::vector<int> margins_;
};

inline LatticeSet build_lattice(const Roi& roi, const std::vector<int>& margins, int level) {
  check_level(level);
  require_same_dim(roi.dim(), margins.size(), "lattice margins");
  if (!roi.has_integer_points()) {
    throw Error(ErrorCode::kConfiguration, "region of interest contains no integer point");
  }
  Index lo(roi.dim());
  Index hi(roi.dim());
  const std::int64_t scale = std::int64_t{1} << level;
  for (std::size_t l = 0; l < roi.dim(); ++l) {
    if (margins[l] <= 0) {
      throw Error(ErrorCode::kConfiguration, "support margins must be positive");
    }
    lo[l] = scale * roi.integer_min(l) - margins[l];
    hi[l] = scale * roi.integer_max(l);
  }
  return LatticeSet(level, lo, hi, margins);
}

/// Outcome of the zero-exclusion test for spherical reference waves.
struct ZeroExclusion {
  bool excluded = false;
  std::size_t axis = 0;  ///< witness axis (0-based), valid when excluded
  double bound = 0.0;    ///< q: lower bound on ||2^{-N} k||_2 for all N >= 1
};

/// 0 is outside the level-N lattice for every N >= 1 iff some axis has
/// 2 L_min - M > 0 or L_max < 0.
inline ZeroExclusion zero_excluded(const Roi& roi, const std::vector<int>& margins) {
  require_same_dim(roi.dim(), margins.size(), "zero exclusion margins");
  for (std::size_t l = 0; l < roi.dim(); ++l) {
    const auto lmin = roi.integer_min(l);
    const auto lmax = roi.integer_max(l);
    if (2 * lmin - margins[l] > 0 || lmax < 0) {
      const double q = std::min(std::abs(static_cast<double>(lmin) - 0.5 * margins[l]),
                                std::abs(static_cast<double>(lmax)));
      return {true, l, q};
    }
  }
  return {};
}

/// A point with dyadic coordinates numer * 2^{-shift}.
struct DyadicPoint {
  Index numer;
  int shift = 0;

  Point location() const {
    Point x(numer.size());
    for (std::size_t l = 0; l < numer.size(); ++l) {
      x[l] = std::ldexp(static_cast<double>(numer[l]), -shift);
    }
    return x;
  }

  /// Coordinates in lattice units at level N, i.e. 2^N * location().
  Point lattice_units(int level) const {
    Point x(numer.size());
    for (std::size_t l = 0; l < numer.size(); ++l) {
      x[l] = std::ldexp(static_cast<double>(numer[l]), level - shift);
    }
    return x;
  }

  friend bool operator==(const DyadicPoint&, const DyadicPoint&) = default;
};

enum class TripleKind { kPlane, kSpherical };

struct TripleVariant {
  TripleKind kind = TripleKind::kPlane;
  std::size_t axis = 0;  ///< 0-based companion axis j0 (plane only)

  static TripleVariant plane(std::size_t axis) { return {TripleKind::kPlane, axis}; }
  static TripleVariant spherical() { return {TripleKind::kSpherical, 0}; }

  friend bool operator==(const TripleVariant&, const TripleVariant&) = default;
};

/// (k, k', k'') with sample locations 2^{-N}k, 2^{-N}k', 2^{-N}k''.
struct Triple {
  Index k;
  DyadicPoint base;
  DyadicPoint plus;   ///< k'
  DyadicPoint minus;  ///< k''

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Companion points of one lattice index:
///   plane:     k' = k + e_{j0},      k'' = k - e_{j0}
///   spherical: k' = (1 + 2^{-N}) k,  k'' = (1 - 2^{-N}) k
inline Triple make_triple(const Index& k, int level, const TripleVariant& variant) {
  Triple t;
  t.k = k;
  t.base = {k, level};
  if (variant.kind == TripleKind::kPlane) {
    if (variant.axis >= k.size()) {
      throw Error(ErrorCode::kShape, "plane companion axis out of range");
    }
    Index kp = k;
    Index km = k;
    kp[variant.axis] += 1;
    km[variant.axis] -= 1;
    t.plus = {kp, level};
    t.minus = {km, level};
  } else {
    const std::int64_t scale = std::int64_t{1} << level;
    Index kp(k.size());
    Index km(k.size());
    for (std::size_t l = 0; l < k.size(); ++l) {
      kp[l] = k[l] * (scale + 1);
      km[l] = k[l] * (scale - 1);
    }
    t.plus = {kp, 2 * level};
    t.minus = {km, 2 * level};
  }
  return t;
}

class TripleSet {
 public:
  TripleSet(TripleVariant variant, int level, std::vector<Triple> triples)
      : variant_(variant), level_(level), triples_(std::move(triples)) {}

  const TripleVariant& variant() const noexcept { return variant_; }
  int level() const noexcept { return level_; }
  const std::vector<Triple>& triples() const noexcept { return triples_; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  const Triple& operator[](std::size_t i) const { return triples_[i]; }
  auto begin() const { return triples_.begin(); }
  auto end() const { return triples_.end(); }

 private:
  TripleVariant variant_;
  int level_;
  std::vector<Triple> triples_;
};

inline TripleSet build_triples(const LatticeSet& lattice, const TripleVariant& variant) {
  if (variant.kind == TripleKind::kSpherical && lattice.contains(Index(lattice.dim(), 0))) {
    throw Error(ErrorCode::kZeroInLattice,
                "spherical reference waves are undefined at 0, which lies in "
                "the level-" +
                    std::to_string(lattice.level()) + " lattice");
  }
  std::vector<Triple> triples;
  triples.reserve(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    triples.push_back(make_triple(lattice.at(i), lattice.level(), variant));
  }
  return TripleSet(variant, lattice.level(), std::move(triples));
}

}  // namespace holoshot
