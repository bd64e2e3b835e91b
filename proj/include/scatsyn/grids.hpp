#pragma once

#include <memory>
#include <span>
#include <vector>

#include "scatsyn/types.hpp"

namespace scatsyn {

/// Product quadrature on the unit sphere: Gauss-Legendre in cos(theta) times a
/// uniform azimuthal rule. Exact for spherical polynomials of degree <= exactness_degree.
struct SphereGrid {
  int exactness_degree = 0;
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> theta;  // per node
  std::vector<double> phi;    // per node
  std::vector<Vec3> nodes;    // unit vectors
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Product quadrature on the ball of radius `radius` centred at the origin.
/// Node ordering is radial-major, then polar, then azimuthal:
///   index = (ir * n_theta + it) * n_phi + ip.
/// A "ring" is the set of n_phi nodes sharing (ir, it).
struct BallGrid {
  int radial_count = 0;
  int angular_order = 0;
  int n_theta = 0;
  int n_phi = 0;
  double radius = 1.0;
  std::vector<double> radii;       // per radial shell
  std::vector<Vec3> nodes;
  std::vector<double> weights;     // volumes
  std::vector<double> self_radii;  // (4 pi / 3) rho^3 = weight
  std::vector<double> node_radius;
  std::vector<double> node_theta;
  std::vector<double> node_phi;

  std::size_t size() const noexcept { return nodes.size(); }
  int ring_count() const noexcept { return radial_count * n_theta; }
  int ring_of(std::size_t node) const noexcept { return static_cast<int>(node) / n_phi; }
  int azimuth_of(std::size_t node) const noexcept { return static_cast<int>(node) % n_phi; }
};

using SphereGridPtr = std::shared_ptr<const SphereGrid>;
using BallGridPtr = std::shared_ptr<const BallGrid>;

/// Throws std::invalid_argument for order < 2.
SphereGridPtr build_sphere_grid(int order);

/// Throws std::invalid_argument for radial_count < 2, angular_order < 2 or b <= 0.
BallGridPtr build_ball_grid(int radial_count, int angular_order, double b = 1.0);

/// Complex samples on the nodes of a sphere grid (target patterns f, amplitudes A_q).
struct PatternSamples {
  SphereGridPtr grid;
  std::vector<cplx> values;

  PatternSamples() = default;
  PatternSamples(SphereGridPtr g, std::vector<cplx> v);
  static PatternSamples zeros(SphereGridPtr g);
};

/// Complex samples on the nodes of a ball grid (h, H, q, u, w).
struct ComplexField {
  BallGridPtr grid;
  std::vector<cplx> values;

  ComplexField() = default;
  ComplexField(BallGridPtr g, std::vector<cplx> v);
  static ComplexField zeros(BallGridPtr g);
};

/// (sum_i w_i |s_i|^2)^{1/2}. Throws std::invalid_argument on size mismatch.
double l2_norm_sphere(const PatternSamples& samples, const SphereGrid& grid);
double l2_norm_sphere(const PatternSamples& samples);

/// L2(D) norm of a ball field.
double l2_norm_ball(const ComplexField& field);

/// sum_j v_j f_j over a ball grid.
cplx integrate_ball(const BallGrid& grid, std::span<const cplx> values);

/// Pointwise difference of two patterns on the same grid.
PatternSamples operator-(const PatternSamples& a, const PatternSamples& b);

bool same_layout(const BallGrid& a, const BallGrid& b);
bool same_layout(const SphereGrid& a, const SphereGrid& b);

}  // namespace scatsyn
