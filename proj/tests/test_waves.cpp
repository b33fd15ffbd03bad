// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "holoshot/lattice.hpp"
#include "holoshot/waves.hpp"

using namespace holoshot;
using std::numbers::pi;

namespace {

// mu and the ratio straight from the definitions, on raw complex numbers.
double direct_mu(Complex g0, Complex gp, Complex gm) {
  const Complex u = g0 - gp;
  const Complex v = g0 - gm;
  // -Im[u conj(v)] = -(Im u Re v - Re u Im v)
  return -(u.imag() * v.real() - u.real() * v.imag());
}

Complex plane_value(double a, const std::vector<double>& K, const std::vector<double>& x) {
  double phase = 0.0;
  for (std::size_t l = 0; l < K.size(); ++l) phase += K[l] * x[l];
  return {a * std::cos(phase), a * std::sin(phase)};
}

Complex spherical_value(double a, double nu, const std::vector<double>& x) {
  double r = 0.0;
  for (double v : x) r += v * v;
  r = std::sqrt(r);
  return {a / r * std::cos(nu * r), a / r * std::sin(nu * r)};
}

}  // namespace

TEST(EvalWave, Examples) {
  const auto z = eval_wave(PlaneWave(1.0, Point{pi}), Point{1.0});
  EXPECT_NEAR(z.real(), -1.0, 1e-15);
  EXPECT_NEAR(z.imag(), 0.0, 1e-15);
  EXPECT_THROW(SphericalWave(2.0, 0.0), Error);
  const auto s = eval_wave(SphericalWave(1.0, pi), Point{2.0, 0.0});
  EXPECT_NEAR(s.real(), 0.5, 1e-15);
  EXPECT_NEAR(s.imag(), 0.0, 1e-15);
}

TEST(EvalWave, Errors) {
  try {
    eval_wave(SphericalWave(1.0, 1.0), Point{0.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularPoint);
  }
  EXPECT_THROW(PlaneWave(0.0, Point{1.0}), Error);
  EXPECT_THROW(PlaneWave(-1.0, Point{1.0}), Error);
  EXPECT_THROW(SphericalWave(-1.0, 1.0), Error);
  EXPECT_THROW(eval_wave(PlaneWave(1.0, Point{1.0, 2.0}), Point{1.0}), Error);
}

TEST(Mu, CoincidentCompanionGivesZero) {
  Triple t = make_triple(Index{5}, 3, TripleVariant::plane(0));
  t.plus = t.base;
  EXPECT_EQ(mu(PlaneWave(1.0, Point{2.0}), t), 0.0);
  Triple s = make_triple(Index{5, 2}, 3, TripleVariant::spherical());
  s.minus = s.base;
  EXPECT_EQ(mu(SphericalWave(1.0, 3.0), s), 0.0);
}

TEST(Mu, DyadicPlaneExampleLevelThree) {
  const int n = 3;
  const double k = std::ldexp(1.0, n - 2) * pi;
  const PlaneWave g(1.0, Point{k});
  const auto t = make_triple(Index{5}, n, TripleVariant::plane(0));
  const double expected = direct_mu(plane_value(1, {k}, {5.0 / 8}), plane_value(1, {k}, {6.0 / 8}),
                                    plane_value(1, {k}, {4.0 / 8}));
  EXPECT_NEAR(std::abs(mu(g, t)), std::abs(expected), 1e-14);
  EXPECT_NEAR(std::abs(mu(g, t)), 4.0 * std::sin(pi / 4) * std::pow(std::sin(pi / 8), 2), 1e-12);
  EXPECT_NEAR(std::abs(mu(g, t)), 0.414214, 1e-6);
}

TEST(Mu, MatchesDirectArithmeticRandom) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> ki(-40, 40);
  for (int i = 0; i < 500; ++i) {
    const int n = 1 + i % 5;
    const double sc = std::ldexp(1.0, -n);
    const std::vector<double> K{u(rng), u(rng)};
    const Index k{ki(rng), ki(rng)};
    const auto t = make_triple(k, n, TripleVariant::plane(i % 2));
    std::vector<double> x{k[0] * sc, k[1] * sc}, xp = x, xm = x;
    xp[i % 2] += sc;
    xm[i % 2] -= sc;
    const double m = mu(PlaneWave(1.3, Point{K[0], K[1]}), t);
    EXPECT_NEAR(m,
                direct_mu(plane_value(1.3, K, x), plane_value(1.3, K, xp), plane_value(1.3, K, xm)),
                1e-12);
  }
}

TEST(Mu, SphericalZeroWhenPhaseIsFullTurn) {
  const int n = 2;
  const Index k{4, 0};
  // 2^{-2N} nu ||k|| = 2 pi
  const double nu = 2.0 * pi * std::ldexp(1.0, 2 * n) / 4.0;
  const auto t = make_triple(k, n, TripleVariant::spherical());
  EXPECT_NEAR(mu(SphericalWave(1.0, nu), t), 0.0, 1e-12);
}

TEST(Mu, SphericalClosedForm) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> ki(-30, 30);
  std::uniform_real_distribution<double> nu_d(0.1, 8.0);
  std::uniform_real_distribution<double> a_d(0.5, 2.0);
  int checked = 0;
  while (checked < 1000) {
    const int n = 1 + checked % 4;
    const std::size_t d = 1 + checked % 2;
    Index k(d);
    for (auto& v : k) v = ki(rng);
    if (norm2(k) == 0.0) continue;
    const double nu = std::ldexp(nu_d(rng), n);
    const double a = a_d(rng);
    const auto t = make_triple(k, n, TripleVariant::spherical());
    const double got = std::abs(mu(SphericalWave(a, nu), t));
    const double kn = norm2(k);
    const double tn = std::ldexp(1.0, -n);
    const double phase = std::ldexp(nu * kn, -2 * n);
    const double closed = std::ldexp(1.0, 2 * n + 2) * a * a / (kn * kn) /
                          ((1.0 - tn) * (1.0 + tn)) * std::abs(std::sin(phase)) *
                          std::pow(std::sin(0.5 * phase), 2);
    // direct arithmetic on raw values as a second reference
    std::vector<double> x(d), xp(d), xm(d);
    for (std::size_t l = 0; l < d; ++l) {
      x[l] = k[l] * tn;
      xp[l] = x[l] * (1 + tn);
      xm[l] = x[l] * (1 - tn);
    }
    const double direct = std::abs(direct_mu(spherical_value(a, nu, x), spherical_value(a, nu, xp),
                                             spherical_value(a, nu, xm)));
    const double scale = std::max(closed, 1e-300);
    ASSERT_LE(std::abs(got - closed), 1e-10 * scale + 1e-14) << "k=" << to_string(k);
    ASSERT_LE(std::abs(got - direct), 1e-10 * scale + 1e-14);
    ++checked;
  }
}

TEST(Admissibility, DyadicPlaneRatioConstantInLevel) {
  const auto seq = WaveSequence::dyadic_plane(1, 0.999);
  const double theta = 0.999 * pi / 4;
  const double exact = 1.0 / (2.0 * std::sin(theta / 2) * std::sin(theta));
  for (int n = 1; n <= 10; ++n) {
    const auto xi = build_triples(build_lattice(Roi({-1.0}, {2.0}), {3}, n), seq.triple_variant(0));
    const auto rep = admissibility_ratio(seq.at(n), xi);
    EXPECT_NEAR(rep.ratio, exact, 1e-9) << n;
    EXPECT_NEAR(rep.ratio, 1.848, 5e-3);
    EXPECT_TRUE(rep.distinct_ok);
    EXPECT_EQ(rep.degenerate, 0u);
    EXPECT_NEAR(rep.sup_abs_g, 1.0, 1e-15);
    EXPECT_EQ(rep.level, n);
  }
}

TEST(Admissibility, PlaneTripleIndependence) {
  const auto seq = WaveSequence::dyadic_plane(2, 0.999);
  for (int n = 1; n <= 5; ++n) {
    const auto xi = build_triples(build_lattice(Roi({0.0, -1.0}, {1.0, 1.0}), {2, 3}, n),
                                  seq.triple_variant(1));
    const auto g = seq.at(n);
    const double r0 = triple_ratio(eval_triple(g, xi[0]));
    for (const auto& t : xi) ASSERT_NEAR(triple_ratio(eval_triple(g, t)), r0, 1e-12);
  }
}

TEST(Admissibility, ConstantWaveIsInadmissible) {
  const auto xi = build_triples(build_lattice(Roi({0.0}, {1.0}), {2}, 2), TripleVariant::plane(0));
  const auto rep = admissibility_ratio(PlaneWave(1.0, Point{0.0}), xi);
  EXPECT_TRUE(std::isinf(rep.ratio));
  EXPECT_FALSE(rep.distinct_ok);
  EXPECT_EQ(rep.degenerate, xi.size());
  EXPECT_FALSE(rep.admissible());
}

TEST(Admissibility, AliasedWaveMatchesSolverTolerance) {
  // K h = 2 pi: g repeats on the lattice up to rounding, so mu is tiny but nonzero
  const auto xi = build_triples(build_lattice(Roi({1.0}, {2.0}), {3}, 2), TripleVariant::plane(0));
  const PlaneWave g(1.0, Point{8.0 * std::numbers::pi});
  const auto v = eval_triple(g, xi[3]);
  EXPECT_LE(std::abs(mu(v)), default_mu_tolerance(v));
  const auto rep = admissibility_ratio(g, xi);
  EXPECT_EQ(rep.degenerate, xi.size());
  EXPECT_FALSE(rep.admissible());
}

TEST(Admissibility, EmptySetRejected) {
  EXPECT_THROW(
      admissibility_ratio(PlaneWave(1.0, Point{1.0}), TripleSet(TripleVariant::plane(0), 1, {})),
      Error);
}

TEST(Admissibility, CertificatesBoundExactRatio) {
  for (std::size_t d : {1u, 2u}) {
    const auto dyadic_plane = WaveSequence::dyadic_plane(d, 0.999);
    const Roi box(std::vector<double>(d, 1.0), std::vector<double>(d, 2.0));
    // (i) needs eps sqrt(d)(||Omega|| + M/2) <= pi/2
    const double eps = d == 1 ? 0.3 : 0.2;
    const auto dyadic_spherical = WaveSequence::dyadic_spherical(d, eps);
    const Roi far(std::vector<double>(d, 2.0), std::vector<double>(d, 3.0));
    const std::vector<int> m3(d, 3), m2(d, 2);
    for (int n = 1; n <= 8; ++n) {
      const auto xh = build_triples(build_lattice(box, m3, n), dyadic_plane.triple_variant(0));
      const auto rh = admissibility_ratio(dyadic_plane.at(n), xh);
      const auto ch = certificate(dyadic_plane, box, m3, 0, n);
      ASSERT_TRUE(ch.ok());
      EXPECT_LE(rh.ratio, *ch.bound);

      const auto xs = build_triples(build_lattice(far, m2, n), dyadic_spherical.triple_variant());
      const auto rs = admissibility_ratio(dyadic_spherical.at(n), xs);
      const auto cs = certificate(dyadic_spherical, far, m2, 0, n);
      ASSERT_TRUE(cs.ok()) << cs.failure;
      EXPECT_LE(rs.ratio, *cs.bound);
      EXPECT_LE(*cs.bound, *dyadic_spherical_uniform_certificate(eps, far, m2).bound + 1e-9);
      EXPECT_EQ(rs.degenerate, 0u);
    }
  }
}

TEST(Admissibility, DyadicSphericalBoundedness) {
  const auto dyadic_spherical = WaveSequence::dyadic_spherical(1, 0.3);
  const Roi far({2.0}, {3.0});
  const auto z = zero_excluded(far, {2});
  for (int n = 1; n <= 8; ++n) {
    const auto lat = build_lattice(far, {2}, n);
    const auto g = dyadic_spherical.at(n);
    double sup_base = 0.0;
    for (const auto& k : lat.points()) {
      sup_base = std::max(sup_base, std::abs(eval_wave(g, DyadicPoint{k, n}.location())));
    }
    EXPECT_LE(sup_base, 1.0 / z.bound + 1e-15);
    const auto rep = admissibility_ratio(g, build_triples(lat, dyadic_spherical.triple_variant()));
    EXPECT_LE(rep.sup_abs_g, 1.0 / ((1.0 - std::ldexp(1.0, -n)) * z.bound) + 1e-15);
  }
}

TEST(PlaneCertificate, Examples) {
  const auto dyadic_plane = WaveSequence::dyadic_plane(1, 1.0);
  const double expected = 1.0 / (2.0 * std::sin(pi / 4) * std::pow(std::sin(pi / 8), 2));
  for (int n = 1; n <= 12; ++n) {
    const auto c = plane_certificate(dyadic_plane, 0, n);
    ASSERT_TRUE(c.ok());
    EXPECT_NEAR(*c.bound, expected, 1e-9);
  }
  EXPECT_NEAR(expected, 4.8284, 1e-4);
  // a_N = 2 with the phase step 2^{-3} K = pi/4
  const auto a2 = plane_certificate(2.0, std::ldexp(1.0, 3) * pi / 4, 3);
  ASSERT_TRUE(a2.ok());
  EXPECT_NEAR(*a2.bound, expected / 2.0, 1e-9);
  EXPECT_NEAR(*a2.bound, 2.4142, 1e-4);
  // 2^{-N}/lambda = 1, i.e. 2^{-N} K = 2 pi
  const auto bad = plane_certificate(1.0, std::ldexp(2.0 * pi, 3), 3);
  EXPECT_FALSE(bad.ok());
  EXPECT_FALSE(bad.failure.empty());
}

TEST(SphericalCertificate, DyadicSphericalUniformBound) {
  const Roi far({2.0}, {3.0});
  const auto u = dyadic_spherical_uniform_certificate(0.3, far, {2});
  ASSERT_TRUE(u.ok());
  EXPECT_NEAR(u.beta, 4.5, 1e-15);
  EXPECT_NEAR(u.alpha, 0.3, 1e-15);
  EXPECT_NEAR(*u.bound, 4.5 / (std::sin(0.3) * std::pow(std::sin(0.15), 2)), 1e-9);
  EXPECT_NEAR(*u.bound, 682.1, 0.5);
  const auto dyadic_spherical = WaveSequence::dyadic_spherical(1, 0.3);
  for (int n = 1; n <= 8; ++n) {
    const auto c = spherical_certificate(dyadic_spherical, far, {2}, n);
    ASSERT_TRUE(c.ok()) << c.failure;
    EXPECT_NEAR(c.alpha, 0.3, 1e-15);
    EXPECT_NEAR(c.beta, 9.0 / 8.0 * (3.0 + std::ldexp(2.0, -n)), 1e-12);
  }
}

TEST(SphericalCertificate, Failures) {
  const Roi far({2.0}, {3.0});
  const auto big = WaveSequence::dyadic_spherical(1, 0.6);
  for (int n = 1; n <= 6; ++n) {
    const auto c = spherical_certificate(big, far, {2}, n);
    EXPECT_FALSE(c.ok());
    EXPECT_NE(c.failure.find("(i)"), std::string::npos);
  }
  EXPECT_FALSE(dyadic_spherical_uniform_certificate(0.6, far, {2}).ok());
  const auto near =
      spherical_certificate(WaveSequence::dyadic_spherical(1, 0.3), Roi({1.0}, {2.0}), {2}, 2);
  EXPECT_FALSE(near.ok());
  EXPECT_NE(near.failure.find("zero"), std::string::npos);
  const auto dyadic_spherical = WaveSequence::dyadic_spherical(1, 0.3);
  EXPECT_FALSE(spherical_certificate(dyadic_spherical, far, {2}, 3, 0.5).ok());
  EXPECT_FALSE(spherical_certificate(dyadic_spherical, far, {2}, 3, std::nullopt, 1.0).ok());
  const auto loose = spherical_certificate(dyadic_spherical, far, {2}, 3, 0.2, 10.0);
  ASSERT_TRUE(loose.ok());
  EXPECT_NEAR(*loose.bound, 10.0 / (std::sin(0.2) * std::pow(std::sin(0.1), 2)), 1e-9);
}

TEST(WaveSequence, Designs) {
  const auto h = WaveSequence::dyadic_plane(3, 0.999);
  EXPECT_EQ(h.design(), WaveDesign::kDyadicPlane);
  EXPECT_EQ(h.family(), WaveFamily::kPlane);
  for (int n = 1; n <= 6; ++n) {
    const auto k = h.wavevector(n);
    ASSERT_EQ(k.size(), 3u);
    for (double v : k) EXPECT_DOUBLE_EQ(v, std::ldexp(0.999 * pi, n - 2));
    EXPECT_EQ(h.amplitude(n), 1.0);
  }
  const auto s = WaveSequence::dyadic_spherical(2, 0.3);
  EXPECT_EQ(s.family(), WaveFamily::kSpherical);
  EXPECT_DOUBLE_EQ(s.wavenumber(4), 16 * 0.3);
  EXPECT_EQ(s.triple_variant().kind, TripleKind::kSpherical);
  EXPECT_THROW(WaveSequence::dyadic_spherical(1, 0.0), Error);
  EXPECT_THROW(WaveSequence::dyadic_plane(0), Error);
}
