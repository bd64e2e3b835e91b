#include <doctest.h>

#include "oracles.hpp"
#include "scatsyn/grids.hpp"
#include "scatsyn/specfun.hpp"

using namespace scatsyn;

TEST_CASE("HarmonicIndex rejects |m| > l and round-trips through flat order") {
  CHECK_THROWS_AS(HarmonicIndex(1, 2), std::domain_error);
  CHECK_THROWS_AS(HarmonicIndex(-1, 0), std::domain_error);
  int j = 0;
  for (int l = 0; l <= 6; ++l) {
    for (int m = -l; m <= l; ++m, ++j) {
      CHECK(HarmonicIndex(l, m).flat() == j);
      CHECK(HarmonicIndex::from_flat(j) == HarmonicIndex(l, m));
    }
  }
  CHECK(harmonic_count(6) == j);
}

TEST_CASE("j_l closed forms and values at the origin") {
  CHECK(spherical_bessel_j(0, 0.0) == 1.0);
  for (int l = 1; l < 10; ++l) CHECK(spherical_bessel_j(l, 0.0) == 0.0);
  for (double x : {1e-6, 1e-3, 0.3, 1.0, 2.5, 7.0, 20.0, 49.0}) {
    CHECK(spherical_bessel_j(0, x) == doctest::Approx(std::sin(x) / x).epsilon(1e-14));
    const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
    if (x > 1e-3) CHECK(spherical_bessel_j(1, x) == doctest::Approx(j1).epsilon(1e-12));
  }
  CHECK_THROWS_AS(spherical_bessel_j(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(spherical_bessel_j(0, -1.0), std::domain_error);
}

TEST_CASE("j_5(2) against the power series") {
  CHECK(spherical_bessel_j(5, 2.0) == doctest::Approx(oracle::series_j(5, 2.0)).epsilon(1e-12));
}

TEST_CASE("j_l relative accuracy over l <= 40, x <= 50") {
  for (int l = 0; l <= 40; ++l) {
    for (double x = 0.05; x <= 50.0; x += 0.37) {
      const double ref = x <= 8.0 ? oracle::series_j(l, x) : oracle::std_j(l, x);
      if (std::abs(ref) < 1e-280) continue;
      const double tol = x <= 8.0 ? 1e-12 : 1e-10;
      INFO("l=" << l << " x=" << x);
      CHECK(std::abs(spherical_bessel_j(l, x) - ref) <= tol * std::abs(ref) + 1e-300);
    }
  }
}

TEST_CASE("j_l three-term recurrence holds for x in [0.1, 50], l <= 30") {
  for (double x = 0.1; x <= 50.0; x += 0.49) {
    const auto j = spherical_bessel_j_all(31, x);
    for (int l = 1; l <= 30; ++l) {
      const double lhs = j[l - 1] + j[l + 1];
      const double rhs = (2 * l + 1) * j[l] / x;
      const double scale = std::max({std::abs(lhs), std::abs(rhs), std::abs(j[l - 1]), 1e-300});
      CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("j_l all-degree table agrees with single evaluations") {
  for (double x : {0.0, 0.01, 0.7, 3.3, 12.0, 45.0}) {
    const auto all = spherical_bessel_j_all(25, x);
    for (int l = 0; l <= 25; ++l) CHECK(all[l] == doctest::Approx(spherical_bessel_j(l, x)).epsilon(1e-13));
  }
}

TEST_CASE("y_l against libstdc++") {
  for (int l = 0; l <= 10; ++l) {
    for (double x : {0.5, 1.0, 3.0, 10.0, 30.0}) {
      CHECK(spherical_bessel_y(l, x) == doctest::Approx(oracle::std_y(l, x)).epsilon(1e-11));
    }
  }
}

TEST_CASE("spherical harmonics: closed forms, normalization and parity") {
  oracle::Gen gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const double t = gen.uniform(0.0, pi), p = gen.uniform(0.0, 2 * pi);
    CHECK(std::abs(spherical_harmonic({0, 0}, t, p) - 1.0 / std::sqrt(4 * pi)) < 1e-15);
    for (int l = 0; l <= 2; ++l) {
      for (int m = -l; m <= l; ++m) {
        CHECK(std::abs(spherical_harmonic({l, m}, t, p) - oracle::Y(l, m, t, p)) < 1e-14);
      }
    }
    // Y(-x) = (-1)^l Y(x): antipode of (t, p) is (pi - t, p + pi)
    for (int l = 0; l <= 12; ++l) {
      for (int m = -l; m <= l; ++m) {
        const cplx a = spherical_harmonic({l, m}, t, p);
        const cplx b = spherical_harmonic({l, m}, pi - t, p + pi);
        CHECK(std::abs(b - ((l % 2) ? -a : a)) < 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(spherical_harmonic(HarmonicIndex(3, 4), 0.1, 0.2), std::domain_error);
}

TEST_CASE("spherical harmonics: conjugate symmetry and batch agreement") {
  oracle::Gen gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 d = gen.unit();
    const auto ang = angles_of(d);
    const auto all = spherical_harmonics_all(10, d);
    for (int l = 0; l <= 10; ++l) {
      for (int m = -l; m <= l; ++m) {
        const cplx y = spherical_harmonic({l, m}, ang.theta, ang.phi);
        CHECK(std::abs(all[HarmonicIndex(l, m).flat()] - y) < 1e-13);
        const cplx ym = spherical_harmonic({l, -m}, ang.theta, ang.phi);
        CHECK(std::abs(ym - ((m % 2) ? -1.0 : 1.0) * std::conj(y)) < 1e-13);
      }
    }
  }
}

TEST_CASE("orthonormality on an exact sphere grid") {
  const int N = 16;
  const auto g = build_sphere_grid(N);
  std::vector<std::vector<cplx>> ys(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) ys[i] = spherical_harmonics_all(N / 2, g->nodes[i]);
  const int n = harmonic_count(N / 2);
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < g->size(); ++i) s += g->weights[i] * ys[i][a] * std::conj(ys[i][b]);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("radial moment: l = 0 closed form") {
  for (double k : {0.5, 1.0, 2.0, 5.0}) {
    const double ref = std::sqrt(2.0 / (pi * k)) * (std::sin(k) - k * std::cos(k)) / (k * k);
    CHECK(std::abs(radial_moment_g(0, k) - ref) <= 1e-12);
  }
}

TEST_CASE("radial moment: small-k leading term") {
  const double k = 1e-3;
  for (int l = 0; l <= 8; ++l) {
    const double lead = std::pow(k, l + 0.5) / (std::pow(2.0, l + 0.5) * std::tgamma(l + 1.5) * (l + 3));
    CHECK(radial_moment_g(l, k) / lead == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("radial moment: agrees with Simpson quadrature") {
  for (double k : {0.5, 1.0, 3.0, 10.0}) {
    for (int l = 0; l <= 20; l += 2) {
      CHECK(std::abs(radial_moment_g(l, k) - oracle::radial_moment(l, k)) <= 1e-10);
    }
  }
}

TEST_CASE("radial moment: decay in l") {
  // strictly decreasing in l for k <= 2; for larger k only eventually
  for (double k : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    for (int l = 0; l < 20; ++l) CHECK(radial_moment_g(l + 1, k) < radial_moment_g(l, k));
  }
  for (double k : {3.0, 4.0, 5.0}) {
    for (int l = 6; l < 20; ++l) CHECK(radial_moment_g(l + 1, k) < radial_moment_g(l, k));
  }
  CHECK_THROWS_AS(radial_moment_g(0, 0.0), std::domain_error);
  CHECK_THROWS_AS(radial_moment_g(-1, 1.0), std::domain_error);
}

TEST_CASE("radial moment: converges for l <= 60, k <= 100") {
  for (int l : {0, 15, 30, 45, 60}) {
    for (double k : {0.1, 10.0, 55.0, 100.0}) CHECK_NOTHROW(radial_moment_g(l, k));
  }
}

TEST_CASE("plane wave partial sum") {
  oracle::Gen gen(3);
  const Vec3 beta = gen.unit();
  CHECK(std::abs(plane_wave_partial_sum({0, 0, 0}, beta, 2.0, 0) - 1.0) < 1e-15);
  for (int i = 0; i < 20; ++i) {
    const Vec3 x = gen.unit();
    const cplx exact = std::polar(1.0, -2.0 * dot(beta, x));
    CHECK(std::abs(plane_wave_partial_sum(x, beta, 2.0, 30) - exact) <= 1e-10);
  }
  // error decreases strictly once L exceeds kr + 10
  const Vec3 x = gen.unit() * 2.5;
  const double k = 2.0;
  const cplx exact = std::polar(1.0, -k * dot(beta, x));
  double prev = std::abs(plane_wave_partial_sum(x, beta, k, 16) - exact);
  for (int L = 17; L <= 24; ++L) {
    const double e = std::abs(plane_wave_partial_sum(x, beta, k, L) - exact);
    if (prev < 1e-14) break;
    CHECK(e < prev);
    prev = e;
  }
}
