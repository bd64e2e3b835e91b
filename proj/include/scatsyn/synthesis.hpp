#pragma once

#include <limits>
#include <string>
#include <vector>

#include "scatsyn/forward.hpp"
#include "scatsyn/harmonics.hpp"

namespace scatsyn {

/// |g(l, k)| below this marks degree l as unreachable at wavenumber k.
inline constexpr double radial_moment_floor = 1e-14;

/// The auxiliary density h with h(x) = sum h_lm Y_lm(x/|x|) inside the unit ball
/// (radial profiles constant in r), together with its samples on a ball grid.
struct AuxiliaryDensity {
  HarmonicCoeffs coeffs;
  ComplexField field;
  double k = 0.0;
};

/// h_lm = f_lm / (-(-i)^l sqrt(pi/(2k)) g(l, k)) for l <= L, zero above.
/// Requires grid->radius == 1; throws UnreachableDegree when |g(l, k)| < floor.
AuxiliaryDensity synthesize_h(const HarmonicCoeffs& f_coeffs, double k, int L, BallGridPtr grid);

/// || f(a') + (1/4 pi) int_D e^{-i k a'.x} h(x) dx ||_{L2(S^2)} with ball quadrature.
double predicted_residual(const ComplexField& h, const PatternSamples& f, double k);

struct SynthesisReport {
  int L_used = -1;
  double tail_energy = 0.0;
  double denom_min_modulus = 0.0;
  double denom_threshold = 0.1;
  double predicted_residual = std::numeric_limits<double>::quiet_NaN();
  double scale = 1.0;
  bool condition_passed = false;
};

struct SynthesisOptions {
  double denom_threshold = 0.1;
  SelfCellRule self_cell = SelfCellRule::Subtraction;
};

struct PotentialResult {
  ComplexField q;
  std::vector<cplx> denominator;
  SynthesisReport report;
};

/// q_j = h_j / d_j with d_j = e^{ik alpha.x_j} - (G h)_j, G the forward solver's
/// weighted kernel. The report flags condition_passed = false when
/// min_j |d_j| <= threshold; q is still returned in that case.
PotentialResult synthesize_q(const ComplexField& h, double k, const Vec3& alpha,
                             const SynthesisOptions& opts = {});

/// int_{B_b} g(x, y) h(y) dy at every grid node for h = sum h_lm Y_lm(y/|y|) on the
/// ball, through the addition theorem: a one-dimensional radial integral per (l, r).
std::vector<cplx> ball_volume_potential(const HarmonicCoeffs& h, double k, const BallGrid& grid);

/// Same as synthesize_q but with the denominator evaluated by
/// ball_volume_potential, so q does not depend on the forward discretization.
PotentialResult synthesize_q_analytic(const AuxiliaryDensity& h, const Vec3& alpha,
                                      const SynthesisOptions& opts = {});

struct LeastSquaresResult {
  ComplexField h;
  std::vector<cplx> coefficients;
  double residual = 0.0;
  bool ridge_applied = false;
  double ridge = 0.0;
  std::string warning;
};

/// Basis function j of the least-squares route, in nested order: total degree
/// s = l + p ascending, then l, then m. phi = P_p(2r/b - 1) Y_lm(x/|x|).
struct BasisLabel {
  int radial_degree;
  int l;
  int m;
};
BasisLabel least_squares_basis_label(int j);

/// Minimizes || f + (1/4 pi) int e^{-ik a'.x} h dx || over span of the first
/// basis_size basis functions by the normal equations. A ridge of 1e-13 * lambda_max
/// is added when the Gram matrix condition exceeds 1e12.
LeastSquaresResult least_squares_h(const PatternSamples& f, int basis_size, double k,
                                   BallGridPtr grid);

/// Minimum denominator modulus as a function of the scale t applied to h:
///   m(t) = min_j |u0_j - t (G h)_j|.
class DenominatorCurve {
 public:
  DenominatorCurve(const ComplexField& h, double k, const Vec3& alpha,
                   const SynthesisOptions& opts);
  double min_modulus(double t) const;

 private:
  std::vector<cplx> incident_;
  std::vector<cplx> kernel_h_;
};

struct AutoscaleResult {
  double scale = 1.0;
  double denom_min_modulus = 0.0;
  bool found = false;
};

/// Largest t in (0, 1] such that every scale in (0, t] keeps the denominator above the threshold:
/// a uniform scan locates the first failure, bisection then pins the crossing.
AutoscaleResult autoscale(const ComplexField& h, double k, const Vec3& alpha,
                          const SynthesisOptions& opts = {}, int scan_steps = 256);

}  // namespace scatsyn
