#include "scatsyn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scatsyn {

RoundTripReport roundtrip(const PatternSamples& f, double epsilon, double k, const Vec3& alpha,
                          const RoundTripConfig& config) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("roundtrip: epsilon must be > 0");
  RoundTripReport rep;
  rep.epsilon_target = epsilon;
  rep.radial_count = config.radial_count;
  rep.angular_order = config.angular_order;
  rep.sphere_order = f.grid->exactness_degree;

  const int L_max = std::min(config.L_max, f.grid->exactness_degree / 2);
  const HarmonicCoeffs coeffs = analyze(f, L_max);
  rep.L_used = choose_cutoff(coeffs, epsilon * epsilon / 4.0);
  rep.tail_energy = tail_energy(coeffs, rep.L_used);

  const BallGridPtr grid = build_ball_grid(config.radial_count, config.angular_order, 1.0);
  rep.ball_nodes = grid->size();
  const AuxiliaryDensity aux = synthesize_h(coeffs, k, rep.L_used, grid);
  rep.predicted_residual = predicted_residual(aux.field, f, k);

  // the quadrature route has to see the same discrete kernel as the solver
  SynthesisOptions synth = config.synthesis;
  synth.self_cell = config.solve.self_cell;

  const PotentialResult pot = synthesize_q_analytic(aux, alpha, synth);
  rep.denom_min_modulus = pot.report.denom_min_modulus;
  if (!pot.report.condition_passed) {
    throw ConditionFailure(
        "roundtrip: denominator minimum " + std::to_string(pot.report.denom_min_modulus) +
            " is not above the threshold " + std::to_string(synth.denom_threshold) +
            "; the target pattern is too large, rescale f",
        pot.report.denom_min_modulus);
  }
  const ScatteringSolution sol = solve_scattering(pot.q, k, alpha, config.solve);
  rep.solver_residual = sol.relative_residual;
  rep.solve_method = to_string(sol.method);
  const PatternSamples a_q = scattering_amplitude(pot.q, sol.u, k, f.grid);
  const PatternSamples a_h = far_field_of_density(aux.field, k, f.grid);
  rep.achieved_error = l2_norm_sphere(a_q - f);
  rep.forward_discrepancy = l2_norm_sphere(a_q - a_h);

  if (config.check_consistency) {
    const PotentialResult disc = synthesize_q(aux.field, k, alpha, synth);
    rep.denom_min_modulus_quadrature = disc.report.denom_min_modulus;
    const ScatteringSolution sol_d = solve_scattering(disc.q, k, alpha, config.solve);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid->size(); ++j) {
      worst = std::max(worst, std::abs(disc.q.values[j] * sol_d.u.values[j] - aux.field.values[j]));
    }
    rep.qu_minus_h_max = worst;
  }
  rep.passed = rep.achieved_error <= epsilon;
  return rep;
}

std::vector<Lemma1Entry> lemma1_study(const PatternSamples& f, std::span<const int> L_values,
                                      double k, BallGridPtr grid) {
  std::vector<Lemma1Entry> out;
  if (L_values.empty()) return out;
  const int L_top = *std::max_element(L_values.begin(), L_values.end());
  const HarmonicCoeffs coeffs = analyze(f, L_top);
  for (int L : L_values) {
    Lemma1Entry e;
    e.L = L;
    try {
      const AuxiliaryDensity aux = synthesize_h(coeffs, k, L, grid);
      e.residual = predicted_residual(aux.field, f, k);
      e.h_norm = l2_norm_ball(aux.field);
    } catch (const UnreachableDegree&) {
      e.reachable = false;
      e.residual = std::numeric_limits<double>::quiet_NaN();
      e.h_norm = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(e);
  }
  return out;
}

std::vector<SmallnessEntry> smallness_probe(const ComplexField& h, std::span<const double> c_values,
                                            double k, const Vec3& alpha, const SolveOptions& opts) {
  const BallGrid& grid = *h.grid;
  const Vec3 a = normalized(alpha);
  double h_sq = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) h_sq += grid.weights[j] * std::norm(h.values[j]);

  std::vector<SmallnessEntry> out;
  for (double c : c_values) {
    SmallnessEntry e;
    e.c = c;
    if (!(c > 0.0)) throw std::invalid_argument("smallness_probe: c values must be positive");
    std::vector<cplx> q(grid.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
      q[j] = c * std::conj(h.values[j]) * std::polar(1.0, -k * dot(a, grid.nodes[j]));
    }
    const ComplexField qf(h.grid, std::move(q));
    const double bound = operator_norm_bound(qf);
    if (!(bound < 1.0)) {
      e.skipped = true;
      e.note = "operator_norm_bound " + std::to_string(bound) + " >= 1";
      out.push_back(e);
      continue;
    }
    const ScatteringSolution sol = solve_scattering(qf, k, alpha, opts);
    cplx v = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      v += grid.weights[j] * h.values[j] * qf.values[j] * sol.u.values[j];
    }
    e.value = v;
    e.deviation = std::abs(v / c - h_sq);
    out.push_back(e);
  }
  return out;
}

double smallness_slope(std::span<const SmallnessEntry> entries) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const auto& e : entries) {
    if (e.skipped || !(e.deviation > 0.0)) continue;
    const double x = std::log(e.c), y = std::log(e.deviation);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ComplexField smooth_bump(BallGridPtr grid, double l2_norm) {
  std::vector<cplx> v(grid->size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const Vec3& x = grid->nodes[j];
    const double b = grid->radius;
    const double s = 1.0 - dot(x, x) / (b * b);
    v[j] = s * s * (1.0 + 0.5 * x.x / b);
  }
  ComplexField f(std::move(grid), std::move(v));
  const double n = l2_norm_ball(f);
  for (auto& x : f.values) x *= l2_norm / n;
  return f;
}

}  // namespace scatsyn
