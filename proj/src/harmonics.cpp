#include "scatsyn/harmonics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace scatsyn {

HarmonicCoeffs::HarmonicCoeffs(int L) : L_(L) {
  if (L < 0) throw std::invalid_argument("HarmonicCoeffs: degree must be >= 0");
  values_.assign(harmonic_count(L), cplx{});
}

double HarmonicCoeffs::energy() const {
  double e = 0.0;
  for (const cplx& c : values_) e += std::norm(c);
  return e;
}

HarmonicCoeffs HarmonicCoeffs::truncated(int L) const {
  HarmonicCoeffs out(L);
  const int n = harmonic_count(std::min(L, L_));
  std::copy_n(values_.begin(), n, out.values_.begin());
  return out;
}

HarmonicCoeffs analyze(const PatternSamples& samples, int L) {
  const SphereGrid& grid = *samples.grid;
  if (grid.exactness_degree < 2 * L) {
    throw std::invalid_argument("analyze: grid exactness " + std::to_string(grid.exactness_degree) +
                                " is below 2L = " + std::to_string(2 * L));
  }
  HarmonicCoeffs c(L);
  auto& out = c.flat();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx ws = grid.weights[i] * samples.values[i];
    if (ws == cplx{}) continue;
    const auto y = spherical_harmonics_all(L, grid.theta[i], grid.phi[i]);
    for (std::size_t n = 0; n < y.size(); ++n) out[n] += ws * std::conj(y[n]);
  }
  return c;
}

PatternSamples synthesize_pattern(const HarmonicCoeffs& coeffs, SphereGridPtr grid) {
  std::vector<cplx> values(grid->size());
  const auto& c = coeffs.flat();
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const auto y = spherical_harmonics_all(coeffs.degree(), grid->theta[i], grid->phi[i]);
    cplx s = 0.0;
    for (std::size_t n = 0; n < y.size(); ++n) s += c[n] * y[n];
    values[i] = s;
  }
  return {std::move(grid), std::move(values)};
}

double tail_energy(const HarmonicCoeffs& full, int L) {
  if (L < 0 || L > full.degree()) {
    throw std::invalid_argument("tail_energy: cutoff outside [0, degree]");
  }
  double e = 0.0;
  const auto& c = full.flat();
  for (std::size_t n = harmonic_count(L); n < c.size(); ++n) e += std::norm(c[n]);
  return e;
}

int choose_cutoff(const HarmonicCoeffs& full, double budget) {
  for (int L = 0; L < full.degree(); ++L) {
    if (tail_energy(full, L) < budget) return L;
  }
  return full.degree();
}

}  // namespace scatsyn
