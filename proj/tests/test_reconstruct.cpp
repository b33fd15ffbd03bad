// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "holoshot/reconstruct.hpp"
#include "oracles.hpp"

using namespace holoshot;
using std::numbers::pi;

namespace {

TargetFunction chirp(std::size_t d) {
  TargetParams p;
  p.center = {0.0};
  p.frequency = {pi};
  return builtin_target("gaussian_chirp", d, p);
}

TargetFunction constant(std::complex<double> z, std::size_t d) {
  TargetParams p;
  p.value = z;
  return builtin_target("complex_constant", d, p);
}

StudyConfig study(TargetFunction f, WaveSequence w, std::vector<int> orders, Roi roi, int lo,
                  int hi) {
  return StudyConfig{
      std::move(f), std::move(w), RefinableFunction(std::move(orders)), std::move(roi), {}, lo, hi};
}

// sum over every lattice index, no stencil shortcut, oracle B-splines
Complex brute_synthesis(const RecoveredSamples& s, const std::vector<int>& orders,
                        const LatticeSet& lat, const Point& x) {
  Complex sum = 0.0;
  for (const auto& k : lat.points()) {
    double w = 1.0;
    for (std::size_t l = 0; l < x.size(); ++l) {
      w *= oracle::truncated_power_bspline(orders[l], std::ldexp(x[l], lat.level()) - k[l]);
    }
    sum += w * s.value(k);
  }
  return sum;
}

}  // namespace

TEST(Synthesize, ReproducesConstants) {
  const std::complex<double> z0{1.5, -0.5};
  for (const auto& orders : std::vector<std::vector<int>>{{2}, {3}, {2, 3}}) {
    const std::size_t d = orders.size();
    const Roi roi(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0));
    const RefinableFunction phi(orders);
    for (int n = 1; n <= 4; ++n) {
      const auto lat = build_lattice(roi, orders, n);
      const auto s = exact_samples(constant(z0, d), lat);
      std::mt19937_64 rng(n);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (int i = 0; i < 200; ++i) {
        Point x(d);
        for (auto& v : x) v = u(rng);
        ASSERT_LE(std::abs(synthesize(s, phi, x) - z0), 1e-10);
      }
    }
  }
}

TEST(Synthesize, SingleSample) {
  const RefinableFunction phi({3, 2});
  const Index k0{5, -2};
  RecoveredSamples s(3, Index{0, -4}, Index{10, 4});
  s.set(k0, {1.0, 0.0}, 1.0);
  // x = 2^{-N}(k0 + support center)
  const Point x{std::ldexp(5.0 + 1.5, -3), std::ldexp(-2.0 + 1.0, -3)};
  EXPECT_NEAR(synthesize(s, phi, x).real(), phi(Point{1.5, 1.0}), 1e-15);
  EXPECT_NEAR(synthesize(s, phi, x).real(), 0.75, 1e-15);
  EXPECT_EQ(synthesize(s, phi, Point{50.0, 50.0}), Complex(0.0, 0.0));
  EXPECT_EQ(synthesize(s, phi, Point{-50.0, 0.0}), Complex(0.0, 0.0));
}

TEST(Synthesize, MatchesBruteForce) {
  const std::vector<int> orders{3, 2};
  const RefinableFunction phi(orders);
  const Roi roi({1.0, 0.0}, {2.0, 1.0});
  const auto lat = build_lattice(roi, orders, 3);
  const auto s = exact_samples(chirp(2), lat);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Point x{1.0 + u(rng), u(rng)};
    ASSERT_LE(std::abs(synthesize(s, phi, x) - brute_synthesis(s, orders, lat, x)), 1e-12);
  }
}

TEST(Synthesize, Locality) {
  const RefinableFunction phi({3, 2, 4});
  const auto lat = build_lattice(Roi({0, 0, 0}, {1, 1, 1}), {3, 2, 4}, 2);
  const auto s = exact_samples(chirp(3), lat);
  SynthesisStats stats;
  synthesize(s, phi, Point{0.3, 0.6, 0.9}, &stats);
  EXPECT_LE(stats.coefficients_touched, 24u);
  stats = {};
  synthesize(RecoveredSamples(1, Index{0}, Index{4}), RefinableFunction({5}), Point{0.4}, &stats);
  EXPECT_LE(stats.coefficients_touched, 5u);
}

TEST(Synthesize, DimensionMismatch) {
  EXPECT_THROW(
      synthesize(RecoveredSamples(1, Index{0}, Index{4}), RefinableFunction({2}), Point{0.1, 0.2}),
      Error);
}

TEST(L2Error, ZeroCase) {
  const auto lat = build_lattice(Roi({0.0}, {1.0}), {2}, 3);
  const auto s = exact_samples(constant(0.0, 1), lat);
  EXPECT_EQ(l2_error(constant(0.0, 1), s, RefinableFunction({2}), Roi({0.0}, {1.0}), 64), 0.0);
  EXPECT_THROW(l2_error(constant(0.0, 1), s, RefinableFunction({2}), Roi({0.0}, {1.0}), 1.0),
               Error);
}

TEST(L2Error, MatchesIndependentQuadrature) {
  const std::vector<int> orders{3};
  const Roi roi({1.0}, {2.0});
  const auto f = chirp(1);
  const auto lat = build_lattice(roi, orders, 3);
  const auto s = exact_samples(f, lat);
  const int cells = 256;
  double acc = 0.0;
  for (int i = 0; i < cells; ++i) {
    const Point x{1.0 + (i + 0.5) / cells};
    acc += std::norm(f(x) - brute_synthesis(s, orders, lat, x)) / cells;
  }
  EXPECT_NEAR(l2_error(f, s, RefinableFunction(orders), roi, cells), std::sqrt(acc), 1e-12);
}

TEST(L2Error, BaselineDecreasesAndGridIsConverged) {
  const std::vector<int> orders{3};
  const Roi roi({1.0}, {2.0});
  const auto f = chirp(1);
  const RefinableFunction phi(orders);
  double prev = INFINITY;
  for (int n = 2; n <= 7; ++n) {
    const auto s = exact_samples(f, build_lattice(roi, orders, n));
    const double cells = std::ldexp(1.0, n + 4);
    const double e = l2_error(f, s, phi, roi, cells);
    EXPECT_LT(e, prev);
    EXPECT_LT(std::abs(l2_error(f, s, phi, roi, 2 * cells) - e), 0.01 * e) << n;
    prev = e;
  }
}

TEST(L2Norm, Gaussian) {
  // ||e^{-x^2}||_{L2[1,2]}^2 = sqrt(pi/8)(erf(2 sqrt 2) - erf(sqrt 2))
  const double exact =
      std::sqrt(std::sqrt(pi / 8.0) * (std::erf(2.0 * std::sqrt(2.0)) - std::erf(std::sqrt(2.0))));
  EXPECT_NEAR(l2_norm(chirp(1), Roi({1.0}, {2.0}), 1024), exact, 1e-7);
}

TEST(MidpointGridTest, Integrates2dPolynomial) {
  const MidpointGrid g(Roi({0.0, -1.0}, {2.0, 1.0}), 16);
  EXPECT_EQ(g.cells(0), 32u);
  EXPECT_EQ(g.cells(1), 32u);
  // integral of x^2 + y is 16/3; the midpoint rule undershoots x^2 by (b - a) h^2 / 12 per unit y
  const double v = g.integrate([&](const std::array<std::size_t, kMaxDim>& i) {
    const double x = g.node(0, i[0]);
    const double y = g.node(1, i[1]);
    return x * x + y;
  });
  const double h = 2.0 / 32.0;
  EXPECT_NEAR(v, 16.0 / 3.0 - h * h / 12.0 * 2.0 * 2.0, 1e-12);
}

TEST(FitDecay, ExactPowerLaw) {
  const std::vector<int> n{2, 3, 4, 5};
  std::vector<double> e;
  for (int k : n) e.push_back(3.0 * std::pow(2.0, -0.75 * k));
  const auto fit = fit_decay(n, e);
  ASSERT_TRUE(fit.valid());
  EXPECT_NEAR(fit.slope, 0.75, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log2(3.0), 1e-12);
  EXPECT_NEAR(fit.residual, 0.0, 1e-12);
  const std::vector<double> floored{1.0, 0.5, 1e-20, 1e-21};
  const auto f2 = fit_decay(n, floored, 1e-12);
  EXPECT_EQ(f2.points, 2u);
  EXPECT_NEAR(f2.slope, 1.0, 1e-12);
  EXPECT_FALSE(fit_decay(std::vector<int>{2}, std::vector<double>{1.0}).valid());
}

TEST(ConvergenceStudy, DyadicPlaneChirp) {
  const auto rep = convergence_study(
      study(chirp(1), WaveSequence::dyadic_plane(1), {3}, Roi({1.0}, {2.0}), 2, 7));
  ASSERT_EQ(rep.rows.size(), 6u);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    EXPECT_EQ(r.level, 2 + static_cast<int>(i));
    EXPECT_TRUE(r.bound_ok());
    EXPECT_TRUE(r.triangle_ok());
    EXPECT_EQ(r.skipped, 0u);
    EXPECT_GE(r.l2_error, 0.0);
    if (i) {
      EXPECT_LT(r.l2_error, rep.rows[i - 1].l2_error);
      EXPECT_LT(r.baseline_l2_error, rep.rows[i - 1].baseline_l2_error);
    }
    // pipeline <= baseline + gamma * max perturbation * vol^{1/2}
    EXPECT_LE(r.l2_error, r.baseline_l2_error + r.gamma * r.max_perturbation + 1e-6);
  }
  EXPECT_GE(rep.fit.slope, 0.4);
  EXPECT_GE(rep.baseline_fit.slope, rep.fit.slope - 0.2);
  EXPECT_EQ(rep.cells_per_unit, 2048.0);
}

TEST(ConvergenceStudy, Errors) {
  auto cfg = study(chirp(1), WaveSequence::dyadic_plane(1), {3}, Roi({1.0}, {2.0}), 3, 2);
  EXPECT_THROW(convergence_study(cfg), Error);
  cfg.level_min = 0;
  cfg.level_max = 2;
  EXPECT_THROW(convergence_study(cfg), Error);
  auto flat =
      study(chirp(1), WaveSequence::custom_plane(1.0, Point{std::ldexp(2.0 * pi, 2)}, false), {3},
            Roi({1.0}, {2.0}), 2, 3);
  try {
    convergence_study(flat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInadmissible);
    EXPECT_NE(std::string(e.what()).find("level 2"), std::string::npos);
  }
  auto sph = study(chirp(1), WaveSequence::dyadic_spherical(1, 0.3), {2}, Roi({1.0}, {2.0}), 1, 3);
  try {
    convergence_study(sph);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroInLattice);
  }
  auto mismatch = study(chirp(2), WaveSequence::dyadic_plane(1), {3}, Roi({1.0}, {2.0}), 2, 3);
  EXPECT_THROW(convergence_study(mismatch), Error);
}

TEST(ConvergenceStudy, NoiseIsSeeded) {
  auto cfg = study(chirp(1), WaveSequence::dyadic_plane(1), {3}, Roi({1.0}, {2.0}), 2, 4);
  cfg.noise_scale = 1e-3;
  cfg.seed = 99;
  const auto a = convergence_study(cfg);
  const auto b = convergence_study(cfg);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].l2_error, b.rows[i].l2_error);
    EXPECT_TRUE(a.rows[i].bound_ok());
    EXPECT_TRUE(a.rows[i].triangle_ok());
  }
  cfg.seed = 100;
  EXPECT_NE(convergence_study(cfg).rows[0].l2_error, a.rows[0].l2_error);
}
