#pragma once

// Independent reference implementations and input generators for the tests.
// Nothing here calls into the library's numerical code.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "scatsyn/types.hpp"

namespace oracle {

using scatsyn::cplx;
using scatsyn::pi;
using scatsyn::Vec3;

/// j_l(x) by its power series in long double, summed until the terms vanish.
/// Accurate for x up to about 10.
inline double series_j(int l, double xd) {
  const long double x = xd;
  long double lead = 1.0L;
  for (int i = 1; i <= l; ++i) lead *= x / (2 * i + 1);
  long double term = 1.0L, sum = 1.0L;
  for (int n = 1; n < 400; ++n) {
    term *= -(x * x / 2.0L) / (n * (2.0L * l + 2.0L * n + 1.0L));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return static_cast<double>(lead * sum);
}

/// libstdc++'s special math: a second, unrelated implementation.
inline double std_j(int l, double x) { return std::sph_bessel(static_cast<unsigned>(l), x); }
inline double std_y(int l, double x) { return std::sph_neumann(static_cast<unsigned>(l), x); }

/// Adaptive Simpson with Richardson correction.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      int depth = 60) {
  const std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double a0, double b0, double fa, double fm, double fb, double whole, double eps, int d) {
        const double m = 0.5 * (a0 + b0);
        const double lm = 0.5 * (a0 + m), rm = 0.5 * (m + b0);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a0) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b0 - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double diff = left + right - whole;
        if (d <= 0 || std::fabs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
        return rec(a0, m, fa, flm, fm, left, eps / 2.0, d - 1) +
               rec(m, b0, fm, frm, fb, right, eps / 2.0, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

/// g(l, k) = sqrt(2k/pi) int_0^1 r^2 j_l(kr) dr through Simpson and std::sph_bessel.
inline double radial_moment(int l, double k) {
  return std::sqrt(2.0 * k / pi) * simpson([&](double r) { return r * r * std_j(l, k * r); }, 0.0, 1.0, 1e-15);
}

/// Textbook closed forms of the orthonormal harmonics with the Condon-Shortley phase, l <= 2.
inline cplx Y(int l, int m, double t, double p) {
  const double c = std::cos(t), s = std::sin(t);
  const cplx e = std::polar(1.0, m * p);
  switch (l * 10 + (m < 0 ? -m : m)) {
    case 0: return 0.5 * std::sqrt(1.0 / pi);
    case 10: return std::sqrt(3.0 / (4.0 * pi)) * c;
    case 11: return (m > 0 ? -1.0 : 1.0) * std::sqrt(3.0 / (8.0 * pi)) * s * e;
    case 20: return std::sqrt(5.0 / (16.0 * pi)) * (3.0 * c * c - 1.0);
    case 21: return (m > 0 ? -1.0 : 1.0) * std::sqrt(15.0 / (8.0 * pi)) * s * c * e;
    case 22: return std::sqrt(15.0 / (32.0 * pi)) * s * s * e;
  }
  return std::nan("");
}

// Generators for property tests.

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
  cplx complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

  Vec3 unit() {
    std::normal_distribution<double> n;
    Vec3 v{n(rng), n(rng), n(rng)};
    return v * (1.0 / std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z));
  }
  Vec3 in_ball(double radius) { return unit() * (radius * std::cbrt(uniform(0.0, 1.0))); }
};

}  // namespace oracle
