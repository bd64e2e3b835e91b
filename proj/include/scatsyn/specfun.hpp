#pragma once

#include <vector>

#include "scatsyn/types.hpp"

namespace scatsyn {

/// Spherical-harmonic degree/order pair, always with |m| <= l.
class HarmonicIndex {
 public:
  HarmonicIndex(int l, int m);

  int l() const noexcept { return l_; }
  int m() const noexcept { return m_; }

  /// Position in the dense (l, m) ordering: l*l + l + m.
  int flat() const noexcept { return l_ * l_ + l_ + m_; }
  static HarmonicIndex from_flat(int flat);

  bool operator==(const HarmonicIndex&) const = default;

 private:
  int l_;
  int m_;
};

/// Number of (l, m) pairs with l <= L.
constexpr int harmonic_count(int L) { return (L + 1) * (L + 1); }

/// Spherical Bessel function of the first kind j_l(x) for l >= 0, x >= 0.
/// Upward recurrence when x > l, otherwise Miller's downward recurrence.
double spherical_bessel_j(int l, double x);

/// j_0(x) .. j_L(x) in one sweep.
std::vector<double> spherical_bessel_j_all(int L, double x);

/// Spherical Bessel function of the second kind y_l(x) for x > 0 (upward recurrence).
double spherical_bessel_y(int l, double x);

/// Orthonormal spherical harmonic with the Condon-Shortley phase:
///   Y_lm(theta, phi) = N_lm P_l^m(cos theta) e^{i m phi},  Y_{l,-m} = (-1)^m conj(Y_lm).
cplx spherical_harmonic(HarmonicIndex idx, double theta, double phi);

/// All Y_lm with l <= L at one direction, in HarmonicIndex::flat() order.
std::vector<cplx> spherical_harmonics_all(int L, double theta, double phi);
std::vector<cplx> spherical_harmonics_all(int L, const Vec3& direction);

/// Radial Bessel moment g(l, k) = int_0^1 r^{3/2} J_{l+1/2}(k r) dr, evaluated as
/// sqrt(2k/pi) int_0^1 r^2 j_l(k r) dr by adaptive Gauss-Kronrod quadrature.
/// Throws std::domain_error for l < 0 or k <= 0 and std::runtime_error if the
/// quadrature fails to converge.
double radial_moment_g(int l, double k);

/// Truncated plane-wave expansion
///   sum_{l<=L, |m|<=l} 4 pi i^l j_l(k|x|) conj(Y_lm(-x/|x|)) Y_lm(beta)
/// which converges to exp(-i k beta.x).
cplx plane_wave_partial_sum(const Vec3& x, const Vec3& beta, double k, int L);

}  // namespace scatsyn
