#include "scatsyn/synthesis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "scatsyn/quadrature.hpp"

namespace scatsyn {

namespace {

// Y_lm for every distinct angular node of a ball grid (shells repeat the same angles).
std::vector<std::vector<cplx>> angular_harmonics(const BallGrid& grid, int L) {
  const std::size_t per_shell = static_cast<std::size_t>(grid.n_theta) * grid.n_phi;
  std::vector<std::vector<cplx>> y(per_shell);
  for (std::size_t s = 0; s < per_shell; ++s) {
    y[s] = spherical_harmonics_all(L, grid.node_theta[s], grid.node_phi[s]);
  }
  return y;
}

PotentialResult divide(const ComplexField& h, std::vector<cplx> denom, double threshold) {
  PotentialResult out;
  std::vector<cplx> q(h.values.size());
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < q.size(); ++j) {
    dmin = std::min(dmin, std::abs(denom[j]));
    q[j] = h.values[j] / denom[j];
  }
  if (q.empty()) dmin = 0.0;
  out.q = ComplexField(h.grid, std::move(q));
  out.denominator = std::move(denom);
  out.report.denom_min_modulus = dmin;
  out.report.denom_threshold = threshold;
  out.report.condition_passed = dmin > threshold;
  return out;
}

}  // namespace

AuxiliaryDensity synthesize_h(const HarmonicCoeffs& f_coeffs, double k, int L, BallGridPtr grid) {
  if (!(k > 0.0)) throw std::invalid_argument("synthesize_h: k must be > 0");
  if (L < 0) throw std::invalid_argument("synthesize_h: L must be >= 0");
  if (std::abs(grid->radius - 1.0) > 1e-15) {
    throw std::invalid_argument("synthesize_h: the constant-profile construction needs b = 1");
  }
  AuxiliaryDensity aux;
  aux.k = k;
  aux.coeffs = HarmonicCoeffs(L);
  const HarmonicCoeffs f = f_coeffs.truncated(L);
  cplx minus_i_pow = 1.0;  // (-i)^l
  for (int l = 0; l <= L; ++l) {
    const double g = radial_moment_g(l, k);
    if (std::abs(g) < radial_moment_floor) {
      throw UnreachableDegree("synthesize_h: |g(" + std::to_string(l) + ", k)| = " +
                                  std::to_string(std::abs(g)) + " is below the floor; degree " +
                                  std::to_string(l) + " is unreachable at this k",
                              l);
    }
    const cplx denom = -minus_i_pow * std::sqrt(pi / (2.0 * k)) * g;
    for (int m = -l; m <= l; ++m) aux.coeffs(l, m) = f(l, m) / denom;
    minus_i_pow *= -I;
  }

  const auto y = angular_harmonics(*grid, L);
  const auto& c = aux.coeffs.flat();
  std::vector<cplx> values(grid->size());
  const std::size_t per_shell = y.size();
  for (std::size_t s = 0; s < per_shell; ++s) {
    cplx v = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) v += c[n] * y[s][n];
    for (int ir = 0; ir < grid->radial_count; ++ir) values[ir * per_shell + s] = v;
  }
  aux.field = ComplexField(std::move(grid), std::move(values));
  return aux;
}

double predicted_residual(const ComplexField& h, const PatternSamples& f, double k) {
  const PatternSamples a_h = far_field_of_density(h, k, f.grid);
  return l2_norm_sphere(f - a_h);
}

PotentialResult synthesize_q(const ComplexField& h, double k, const Vec3& alpha,
                             const SynthesisOptions& opts) {
  const KernelOperator op(h.grid, k, opts.self_cell, 0);
  const auto gh = op.apply(h.values);
  const ComplexField u0 = incident_wave(h.grid, k, alpha);
  std::vector<cplx> d(gh.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = u0.values[j] - gh[j];
  return divide(h, std::move(d), opts.denom_threshold);
}

namespace {

// int_a^b F(s) ds through s = a (b/a)^t, which flattens the s^{1-l} growth of y_l near 0.
double log_integral(const std::function<double(double)>& fn, double a, double b,
                    const quad::AdaptiveOptions& opts) {
  const double lambda = std::log(b / a);
  const auto res = quad::gauss_kronrod(
      [&](double t) {
        const double s = a * std::exp(lambda * t);
        return fn(s) * s * lambda;
      },
      0.0, 1.0, opts);
  if (!res.converged) throw std::runtime_error("ball_volume_potential: radial quadrature failed");
  return res.value;
}

// R_l(r) = ik [h_l(kr) int_0^r j_l(ks) s^2 ds + j_l(kr) int_r^b h_l(ks) s^2 ds]
cplx radial_potential(int l, double r, double k, double b) {
  quad::AdaptiveOptions opts;
  opts.abs_tol = 1e-300;
  opts.rel_tol = 1e-13;
  const auto jl = [&](double s) { return spherical_bessel_j(l, k * s) * s * s; };
  const auto yl = [&](double s) { return spherical_bessel_y(l, k * s) * s * s; };
  const auto inner = quad::gauss_kronrod(jl, 0.0, r, opts);
  if (!inner.converged) throw std::runtime_error("ball_volume_potential: radial quadrature failed");
  double outer_j = 0.0, outer_y = 0.0;
  if (r < b) {
    const auto oj = quad::gauss_kronrod(jl, r, b, opts);
    if (!oj.converged) throw std::runtime_error("ball_volume_potential: radial quadrature failed");
    outer_j = oj.value;
    outer_y = log_integral(yl, r, b, opts);
  }
  const cplx hl{spherical_bessel_j(l, k * r), spherical_bessel_y(l, k * r)};
  return I * k * (hl * inner.value + spherical_bessel_j(l, k * r) * cplx{outer_j, outer_y});
}

}  // namespace

std::vector<cplx> ball_volume_potential(const HarmonicCoeffs& h, double k, const BallGrid& grid) {
  const int L = h.degree();
  std::vector<std::vector<cplx>> radial(grid.radial_count, std::vector<cplx>(L + 1));
  for (int ir = 0; ir < grid.radial_count; ++ir) {
    for (int l = 0; l <= L; ++l) radial[ir][l] = radial_potential(l, grid.radii[ir], k, grid.radius);
  }
  const auto y = angular_harmonics(grid, L);
  const std::size_t per_shell = y.size();
  std::vector<cplx> out(grid.size());
  for (int ir = 0; ir < grid.radial_count; ++ir) {
    for (std::size_t s = 0; s < per_shell; ++s) {
      cplx v = 0.0;
      for (int l = 0; l <= L; ++l) {
        cplx angular = 0.0;
        for (int m = -l; m <= l; ++m) angular += h(l, m) * y[s][l * l + l + m];
        v += angular * radial[ir][l];
      }
      out[ir * per_shell + s] = v;
    }
  }
  return out;
}

PotentialResult synthesize_q_analytic(const AuxiliaryDensity& h, const Vec3& alpha,
                                      const SynthesisOptions& opts) {
  const auto& grid = h.field.grid;
  const auto volume = ball_volume_potential(h.coeffs, h.k, *grid);
  const ComplexField u0 = incident_wave(grid, h.k, alpha);
  std::vector<cplx> d(volume.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = u0.values[j] - volume[j];
  return divide(h.field, std::move(d), opts.denom_threshold);
}

BasisLabel least_squares_basis_label(int j) {
  if (j < 0) throw std::invalid_argument("least_squares_basis_label: negative index");
  for (int s = 0;; ++s) {
    for (int l = 0; l <= s; ++l) {
      if (j < 2 * l + 1) return {s - l, l, j - l};
      j -= 2 * l + 1;
    }
  }
}

namespace {

double legendre_p(int p, double x) {
  double p0 = 1.0, p1 = x;
  if (p == 0) return 1.0;
  for (int n = 2; n <= p; ++n) {
    const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

LeastSquaresResult least_squares_h(const PatternSamples& f, int basis_size, double k,
                                   BallGridPtr grid) {
  if (basis_size < 1) throw std::invalid_argument("least_squares_h: basis_size must be >= 1");
  const SphereGrid& sphere = *f.grid;
  const auto ndir = static_cast<Eigen::Index>(sphere.size());
  std::vector<BasisLabel> labels(basis_size);
  int lmax = 0;
  for (int j = 0; j < basis_size; ++j) {
    labels[j] = least_squares_basis_label(j);
    lmax = std::max(lmax, labels[j].l);
  }
  const auto y = angular_harmonics(*grid, lmax);
  const std::size_t per_shell = y.size();

  std::vector<std::vector<cplx>> basis(basis_size, std::vector<cplx>(grid->size()));
  Eigen::MatrixXcd far(ndir, basis_size);  // (1/4 pi) int e^{-ik a'.x} phi_j
  for (int j = 0; j < basis_size; ++j) {
    const auto [p, l, m] = labels[j];
    for (int ir = 0; ir < grid->radial_count; ++ir) {
      const double radial = legendre_p(p, 2.0 * grid->radii[ir] / grid->radius - 1.0);
      for (std::size_t s = 0; s < per_shell; ++s) {
        basis[j][ir * per_shell + s] = radial * y[s][l * l + l + m];
      }
    }
    const auto a = far_field_of_density(ComplexField(grid, basis[j]), k, f.grid);
    for (Eigen::Index i = 0; i < ndir; ++i) far(i, j) = -a.values[i];
  }

  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(sphere.weights.data(), ndir);
  const Eigen::VectorXcd fv = Eigen::Map<const Eigen::VectorXcd>(f.values.data(), ndir);
  // column equilibration before forming the Gram matrix
  Eigen::VectorXd colscale(basis_size);
  for (int j = 0; j < basis_size; ++j) {
    const double nrm = std::sqrt((w.array() * far.col(j).array().abs2()).sum());
    colscale(j) = nrm > 0.0 ? 1.0 / nrm : 0.0;
  }
  const Eigen::MatrixXcd fs = far * colscale.asDiagonal();
  const Eigen::MatrixXcd wfs = w.asDiagonal() * fs;
  Eigen::MatrixXcd gram = fs.adjoint() * wfs;
  const Eigen::VectorXcd rhs = -(wfs.adjoint() * fv);

  LeastSquaresResult out;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  const double lmax_eig = eig.eigenvalues().maxCoeff();
  const double lmin_eig = eig.eigenvalues().minCoeff();
  if (lmax_eig > 0.0 && lmin_eig < lmax_eig * 1e-12) {
    out.ridge_applied = true;
    out.ridge = 1e-13 * lmax_eig;
    gram.diagonal().array() += out.ridge;
    out.warning = "least_squares_h: Gram matrix condition exceeds 1e12; ridge " +
                  std::to_string(out.ridge) + " applied";
  }
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(basis_size);
  if (lmax_eig > 0.0) c = gram.ldlt().solve(rhs);
  c = colscale.asDiagonal() * c;

  const Eigen::VectorXcd resid = fv + far * c;
  out.residual = std::sqrt((w.array() * resid.array().abs2()).sum());
  out.coefficients.assign(c.data(), c.data() + basis_size);
  std::vector<cplx> h(grid->size());
  for (int j = 0; j < basis_size; ++j) {
    for (std::size_t n = 0; n < h.size(); ++n) h[n] += out.coefficients[j] * basis[j][n];
  }
  out.h = ComplexField(std::move(grid), std::move(h));
  return out;
}

DenominatorCurve::DenominatorCurve(const ComplexField& h, double k, const Vec3& alpha,
                                   const SynthesisOptions& opts) {
  const KernelOperator op(h.grid, k, opts.self_cell, 0);
  kernel_h_ = op.apply(h.values);
  incident_ = incident_wave(h.grid, k, alpha).values;
}

double DenominatorCurve::min_modulus(double t) const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < incident_.size(); ++j) {
    m = std::min(m, std::abs(incident_[j] - t * kernel_h_[j]));
  }
  return m;
}

AutoscaleResult autoscale(const ComplexField& h, double k, const Vec3& alpha,
                          const SynthesisOptions& opts, int scan_steps) {
  const DenominatorCurve curve(h, k, alpha, opts);
  const auto passes = [&](double t) { return curve.min_modulus(t) > opts.denom_threshold; };
  AutoscaleResult out;
  if (!passes(0.0)) return out;
  double lo = 0.0;
  for (int i = 1; i <= scan_steps; ++i) {
    const double t = static_cast<double>(i) / scan_steps;
    if (passes(t)) {
      lo = t;
      continue;
    }
    double hi = t;
    for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (passes(mid) ? lo : hi) = mid;
    }
    // step back from the crossing so a fresh synthesis at this scale passes despite roundoff
    out.scale = lo * (1.0 - 1e-9);
    out.denom_min_modulus = curve.min_modulus(out.scale);
    out.found = true;
    return out;
  }
  out.scale = 1.0;
  out.denom_min_modulus = curve.min_modulus(1.0);
  out.found = true;
  return out;
}

}  // namespace scatsyn
