// SPDX-License-Identifier: Apache-2.0
//
// Simulated single-shot interference intensities I(x) = |f(x) + g(x)|^2 and
// the quasi-interference oracle A_{k,k'} = |f(2^{-N}k) + g(2^{-N}k')|^2.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "holoshot/lattice.hpp"
#include "holoshot/targets.hpp"
#include "holoshot/waves.hpp"

namespace holoshot {

/// Intensities recorded at the three sample locations of one triple.
struct IntensityRecord {
  int level = 0;
  Triple triple;
  double base = 0.0;   ///< I_{N,k}
  double plus = 0.0;   ///< I_{N,k'}
  double minus = 0.0;  ///< I_{N,k''}

  friend bool operator==(const IntensityRecord&, const IntensityRecord&) = default;
};

inline double intensity(const TargetFunction& f, const Wave& g, const Point& x) {
  return std::norm(f(x) + eval_wave(g, x));
}

inline IntensityRecord sample_record(const TargetFunction& f, const Wave& g, int level,
                                     const Triple& t) {
  return {level, t, intensity(f, g, t.base.location()), intensity(f, g, t.plus.location()),
          intensity(f, g, t.minus.location())};
}

inline std::vector<IntensityRecord> sample_intensities(const TargetFunction& f, const Wave& g,
                                                       const TripleSet& xi) {
  std::vector<IntensityRecord> records;
  records.reserve(xi.size());
  for (const auto& t : xi) records.push_back(sample_record(f, g, xi.level(), t));
  return records;
}

/// (A_{k,k'}, A_{k,k''}): the target frozen at 2^{-N}k, the wave at the
/// companion locations.
inline std::pair<double, double> quasi_intensities(const TargetFunction& f, const Wave& g,
                                                   const Triple& t) {
  const auto fk = f(t.base.location());
  return {std::norm(fk + eval_wave(g, t.plus.location())),
          std::norm(fk + eval_wave(g, t.minus.location()))};
}

/// Record whose companion intensities are replaced by quasi-intensities;
/// recovery from it is exact up to rounding.
inline IntensityRecord quasi_record(const TargetFunction& f, const Wave& g, int level,
                                    const Triple& t) {
  const auto [ap, am] = quasi_intensities(f, g, t);
  return {level, t, intensity(f, g, t.base.location()), ap, am};
}

/// Multiplies every intensity by (1 + eta), eta uniform in [-scale, scale],
/// clamped at 0. Deterministic for a fixed seed.
inline std::vector<IntensityRecord> perturb_intensities(std::vector<IntensityRecord> records,
                                                        double scale, std::uint64_t seed) {
  if (!(scale >= 0.0)) throw Error(ErrorCode::kConfiguration, "noise scale must be >= 0");
  if (scale == 0.0) return records;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> eta(-scale, scale);
  for (auto& r : records) {
    for (double* v : {&r.base, &r.plus, &r.minus}) *v = std::max(0.0, *v * (1.0 + eta(rng)));
  }
  return records;
}

}  // namespace holoshot
