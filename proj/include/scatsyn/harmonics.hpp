#pragma once

#include <vector>

#include "scatsyn/grids.hpp"
#include "scatsyn/specfun.hpp"

namespace scatsyn {

/// Dense table of spherical-harmonic coefficients c_lm for l <= L.
class HarmonicCoeffs {
 public:
  HarmonicCoeffs() : HarmonicCoeffs(0) {}
  explicit HarmonicCoeffs(int L);

  int degree() const noexcept { return L_; }

  cplx& operator()(int l, int m) { return values_[HarmonicIndex(l, m).flat()]; }
  cplx operator()(int l, int m) const { return values_[HarmonicIndex(l, m).flat()]; }

  const std::vector<cplx>& flat() const noexcept { return values_; }
  std::vector<cplx>& flat() noexcept { return values_; }

  /// Sum of |c_lm|^2 over all stored entries.
  double energy() const;

  /// Copy restricted (or zero-padded) to degree L.
  HarmonicCoeffs truncated(int L) const;

 private:
  int L_;
  std::vector<cplx> values_;
};

/// c_lm = sum_i w_i s_i conj(Y_lm(node_i)). Requires grid exactness >= 2L.
HarmonicCoeffs analyze(const PatternSamples& samples, int L);

/// Pointwise sum of c_lm Y_lm at the grid nodes.
PatternSamples synthesize_pattern(const HarmonicCoeffs& coeffs, SphereGridPtr grid);

/// sum_{l > L} |c_lm|^2. Requires 0 <= L <= full.degree().
double tail_energy(const HarmonicCoeffs& full, int L);

/// Smallest L in [0, full.degree()] with tail_energy(full, L) < budget;
/// full.degree() when none qualifies.
int choose_cutoff(const HarmonicCoeffs& full, double budget);

}  // namespace scatsyn
