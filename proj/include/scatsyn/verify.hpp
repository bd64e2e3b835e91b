#pragma once

#include <span>
#include <string>
#include <vector>

#include "scatsyn/synthesis.hpp"

namespace scatsyn {

struct RoundTripConfig {
  int radial_count = 24;
  int angular_order = 16;
  int L_max = 8;
  SynthesisOptions synthesis;
  SolveOptions solve;
  /// Also build the quadrature-consistent potential and report max |q u - h|.
  bool check_consistency = true;
};

struct RoundTripReport {
  double epsilon_target = 0.0;
  /// || A_q - f ||_{L2(S^2)}, A_q from an independent forward solve.
  double achieved_error = 0.0;
  int L_used = 0;
  double tail_energy = 0.0;
  /// || f + (1/4 pi) int e h ||: truncation part of the error.
  double predicted_residual = 0.0;
  /// || A_q - A_h ||: forward discretization part. achieved <= predicted + this.
  double forward_discrepancy = 0.0;
  double denom_min_modulus = 0.0;
  double denom_min_modulus_quadrature = 0.0;
  double qu_minus_h_max = 0.0;
  double solver_residual = 0.0;
  int radial_count = 0;
  int angular_order = 0;
  int sphere_order = 0;
  std::size_t ball_nodes = 0;
  const char* solve_method = "";
  bool passed = false;
};

/// analyze -> cutoff (tail < eps^2/4) -> h -> q -> forward solve -> amplitude -> error.
/// The potential used for the error is built with the analytic volume potential,
/// so the forward solve that checks it shares no discretization with it.
/// Throws ConditionFailure when the denominator drops below the threshold.
RoundTripReport roundtrip(const PatternSamples& f, double epsilon, double k, const Vec3& alpha,
                          const RoundTripConfig& config = {});

struct Lemma1Entry {
  int L = 0;
  double residual = 0.0;
  double h_norm = 0.0;
  bool reachable = true;
};

/// predicted_residual of the constant-profile h for each cutoff in L_values.
std::vector<Lemma1Entry> lemma1_study(const PatternSamples& f, std::span<const int> L_values,
                                      double k, BallGridPtr grid);

struct SmallnessEntry {
  double c = 0.0;
  cplx value{};      // v(c) = int_D h q u dx
  double deviation = 0.0;  // |v(c)/c - ||h||^2|
  bool skipped = false;
  std::string note;
};

/// For each c: q = c conj(h) e^{-ik alpha.x}, solve for u, v(c) = int h q u.
std::vector<SmallnessEntry> smallness_probe(const ComplexField& h, std::span<const double> c_values,
                                            double k, const Vec3& alpha,
                                            const SolveOptions& opts = {});

/// Least-squares slope of log(deviation) against log(c) over non-skipped entries.
double smallness_slope(std::span<const SmallnessEntry> entries);

/// Smooth radial bump (1 - r^2)^2 (1 + x/2) on the ball, scaled to the given L2 norm.
ComplexField smooth_bump(BallGridPtr grid, double l2_norm);

}  // namespace scatsyn
