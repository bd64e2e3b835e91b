#include "scatsyn/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "scatsyn/quadrature.hpp"

namespace scatsyn {

HarmonicIndex::HarmonicIndex(int l, int m) : l_(l), m_(m) {
  if (l < 0 || m < -l || m > l) {
    throw std::domain_error("HarmonicIndex: need |m| <= l, got l=" + std::to_string(l) +
                            " m=" + std::to_string(m));
  }
}

HarmonicIndex HarmonicIndex::from_flat(int flat) {
  if (flat < 0) throw std::domain_error("HarmonicIndex::from_flat: negative index");
  const int l = static_cast<int>(std::sqrt(static_cast<double>(flat)));
  // guard the floating sqrt at perfect squares
  int ll = l;
  while (ll * ll > flat) --ll;
  while ((ll + 1) * (ll + 1) <= flat) ++ll;
  return {ll, flat - ll * ll - ll};
}

namespace {

// Below this x the two leading Taylor terms are exact to double precision.
constexpr double kSeriesBelow = 1e-3;

double j_series(int l, double x) {
  // x^l / (2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
  double lead = 1.0;
  for (int i = 1; i <= l; ++i) lead *= x / (2.0 * i + 1.0);
  double term = 1.0, sum = 1.0;
  const double x2 = 0.5 * x * x;
  for (int k = 1; k <= 6; ++k) {
    term *= -x2 / (k * (2.0 * l + 2.0 * k + 1.0));
    sum += term;
  }
  return lead * sum;
}

}  // namespace

std::vector<double> spherical_bessel_j_all(int L, double x) {
  if (L < 0 || !(x >= 0.0)) {
    throw std::domain_error("spherical_bessel_j: need l >= 0 and x >= 0");
  }
  std::vector<double> j(L + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  if (x < kSeriesBelow) {
    for (int l = 0; l <= L; ++l) j[l] = j_series(l, x);
    return j;
  }
  const double s = std::sin(x), c = std::cos(x);
  const double j0 = s / x;
  const double j1 = (x < 0.5) ? j_series(1, x) : s / (x * x) - c / x;
  j[0] = j0;
  if (L == 0) return j;
  j[1] = j1;
  if (x > L) {
    for (int l = 1; l < L; ++l) j[l + 1] = (2.0 * l + 1.0) / x * j[l] - j[l - 1];
    return j;
  }
  // Miller: recur downward from well above max(L, x) with arbitrary seed values.
  const int start = L + 16 + static_cast<int>(2.0 * std::sqrt(40.0 * (L + x + 1.0)));
  double above = 0.0;
  double cur = 1e-300;
  for (int l = start; l >= 1; --l) {
    const double below = (2.0 * l + 1.0) / x * cur - above;
    above = cur;
    cur = below;
    if (l - 1 <= L) j[l - 1] = cur;
    if (l <= L) j[l] = above;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      above *= 1e-250;
      for (int i = l - 1; i <= L; ++i) j[i] *= 1e-250;
    }
  }
  // normalize against whichever closed form is farther from a zero
  const double scale = (std::abs(j0) >= std::abs(j1)) ? j0 / j[0] : j1 / j[1];
  for (double& v : j) v *= scale;
  return j;
}

double spherical_bessel_j(int l, double x) { return spherical_bessel_j_all(l, x)[l]; }

double spherical_bessel_y(int l, double x) {
  if (l < 0 || !(x > 0.0)) throw std::domain_error("spherical_bessel_y: need l >= 0 and x > 0");
  const double s = std::sin(x), c = std::cos(x);
  double prev = -c / x;
  if (l == 0) return prev;
  double cur = -c / (x * x) - s / x;
  for (int i = 1; i < l; ++i) {
    const double next = (2.0 * i + 1.0) / x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<cplx> spherical_harmonics_all(int L, double theta, double phi) {
  if (L < 0) throw std::domain_error("spherical_harmonics_all: L must be >= 0");
  std::vector<cplx> out(harmonic_count(L));
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  double pmm = 1.0 / std::sqrt(4.0 * pi);
  for (int m = 0; m <= L; ++m) {
    if (m > 0) pmm *= -s * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    const cplx phase = std::polar(1.0, m * phi);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    auto store = [&](int l, double p) {
      const cplx y = p * phase;
      out[l * l + l + m] = y;
      if (m > 0) out[l * l + l - m] = sign * std::conj(y);
    };
    store(m, pmm);
    if (m == L) break;
    double p_lm2 = pmm;
    double p_lm1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
    store(m + 1, p_lm1);
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
      const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - m * m) /
                                 (4.0 * (l - 1) * (l - 1) - 1.0));
      const double p = a * (x * p_lm1 - b * p_lm2);
      p_lm2 = p_lm1;
      p_lm1 = p;
      store(l, p);
    }
  }
  return out;
}

std::vector<cplx> spherical_harmonics_all(int L, const Vec3& direction) {
  const auto a = angles_of(direction);
  return spherical_harmonics_all(L, a.theta, a.phi);
}

cplx spherical_harmonic(HarmonicIndex idx, double theta, double phi) {
  return spherical_harmonics_all(idx.l(), theta, phi)[idx.flat()];
}

double radial_moment_g(int l, double k) {
  if (l < 0 || !(k > 0.0)) throw std::domain_error("radial_moment_g: need l >= 0 and k > 0");
  const auto integrand = [l, k](double r) { return r * r * spherical_bessel_j(l, k * r); };
  quad::AdaptiveOptions opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-14;
  const auto res = quad::gauss_kronrod(integrand, 0.0, 1.0, opts);
  if (!res.converged) {
    throw std::runtime_error("radial_moment_g: quadrature did not converge for l=" +
                             std::to_string(l) + " k=" + std::to_string(k));
  }
  return std::sqrt(2.0 * k / pi) * res.value;
}

cplx plane_wave_partial_sum(const Vec3& x, const Vec3& beta, double k, int L) {
  if (L < 0) throw std::domain_error("plane_wave_partial_sum: L must be >= 0");
  const double r = norm(x);
  const Vec3 antipode = (r > 0.0) ? -(x * (1.0 / r)) : Vec3{0.0, 0.0, -1.0};
  const auto jl = spherical_bessel_j_all(L, k * r);
  const auto y_x = spherical_harmonics_all(L, antipode);
  const auto y_beta = spherical_harmonics_all(L, normalized(beta));
  cplx sum = 0.0;
  cplx il = 1.0;
  for (int l = 0; l <= L; ++l) {
    cplx inner = 0.0;
    for (int m = -l; m <= l; ++m) {
      const int i = l * l + l + m;
      inner += std::conj(y_x[i]) * y_beta[i];
    }
    sum += 4.0 * pi * il * jl[l] * inner;
    il *= I;
  }
  return sum;
}

}  // namespace scatsyn
