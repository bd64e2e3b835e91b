#include "scatsyn/grids.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "scatsyn/quadrature.hpp"

namespace scatsyn {

Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("normalized: zero or non-finite vector");
  return a * (1.0 / n);
}

SphericalAngles angles_of(const Vec3& v) {
  const double r = norm(v);
  if (!(r > 0.0)) return {0.0, 0.0};
  const double theta = std::acos(std::clamp(v.z / r, -1.0, 1.0));
  double phi = std::atan2(v.y, v.x);
  if (phi < 0.0) phi += 2.0 * pi;
  return {theta, phi};
}

Vec3 unit_vector(double theta, double phi) {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

SphereGridPtr build_sphere_grid(int order) {
  if (order < 2) throw std::invalid_argument("build_sphere_grid: order must be >= 2");
  auto grid = std::make_shared<SphereGrid>();
  grid->exactness_degree = order;
  grid->n_theta = order / 2 + 1;
  grid->n_phi = order + 1;
  // descending cos(theta) so theta runs from the north pole southward
  const auto gl = quad::gauss_legendre(grid->n_theta);
  const double dphi = 2.0 * pi / grid->n_phi;
  for (int it = 0; it < grid->n_theta; ++it) {
    const double ct = gl.nodes[grid->n_theta - 1 - it];
    const double wt = gl.weights[grid->n_theta - 1 - it];
    const double theta = std::acos(ct);
    for (int ip = 0; ip < grid->n_phi; ++ip) {
      const double phi = ip * dphi;
      grid->theta.push_back(theta);
      grid->phi.push_back(phi);
      grid->nodes.push_back(unit_vector(theta, phi));
      grid->weights.push_back(wt * dphi);
    }
  }
  return grid;
}

BallGridPtr build_ball_grid(int radial_count, int angular_order, double b) {
  if (radial_count < 2) throw std::invalid_argument("build_ball_grid: radial_count must be >= 2");
  if (angular_order < 2) throw std::invalid_argument("build_ball_grid: angular_order must be >= 2");
  if (!(b > 0.0)) throw std::invalid_argument("build_ball_grid: radius must be > 0");
  const auto sphere = build_sphere_grid(angular_order);
  const auto gl = quad::gauss_legendre(radial_count, 0.0, b);

  auto grid = std::make_shared<BallGrid>();
  grid->radial_count = radial_count;
  grid->angular_order = angular_order;
  grid->n_theta = sphere->n_theta;
  grid->n_phi = sphere->n_phi;
  grid->radius = b;
  grid->radii = gl.nodes;
  const std::size_t n = static_cast<std::size_t>(radial_count) * sphere->size();
  grid->nodes.reserve(n);
  grid->weights.reserve(n);
  for (int ir = 0; ir < radial_count; ++ir) {
    const double r = gl.nodes[ir];
    const double wr = gl.weights[ir] * r * r;
    for (std::size_t s = 0; s < sphere->size(); ++s) {
      grid->nodes.push_back(sphere->nodes[s] * r);
      grid->weights.push_back(wr * sphere->weights[s]);
      grid->node_radius.push_back(r);
      grid->node_theta.push_back(sphere->theta[s]);
      grid->node_phi.push_back(sphere->phi[s]);
    }
  }
  grid->self_radii.reserve(n);
  for (double v : grid->weights) grid->self_radii.push_back(std::cbrt(3.0 * v / (4.0 * pi)));
  return grid;
}

PatternSamples::PatternSamples(SphereGridPtr g, std::vector<cplx> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("PatternSamples: null grid");
  if (values.size() != grid->size()) {
    throw std::invalid_argument("PatternSamples: " + std::to_string(values.size()) +
                                " values for " + std::to_string(grid->size()) + " nodes");
  }
}

PatternSamples PatternSamples::zeros(SphereGridPtr g) {
  const std::size_t n = g->size();
  return {std::move(g), std::vector<cplx>(n)};
}

ComplexField::ComplexField(BallGridPtr g, std::vector<cplx> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("ComplexField: null grid");
  if (values.size() != grid->size()) {
    throw std::invalid_argument("ComplexField: " + std::to_string(values.size()) +
                                " values for " + std::to_string(grid->size()) + " nodes");
  }
}

ComplexField ComplexField::zeros(BallGridPtr g) {
  const std::size_t n = g->size();
  return {std::move(g), std::vector<cplx>(n)};
}

double l2_norm_sphere(const PatternSamples& samples, const SphereGrid& grid) {
  if (samples.values.size() != grid.size()) {
    throw std::invalid_argument("l2_norm_sphere: sample count does not match the grid");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * std::norm(samples.values[i]);
  return std::sqrt(sum);
}

double l2_norm_sphere(const PatternSamples& samples) { return l2_norm_sphere(samples, *samples.grid); }

double l2_norm_ball(const ComplexField& field) {
  double sum = 0.0;
  for (std::size_t j = 0; j < field.values.size(); ++j) {
    sum += field.grid->weights[j] * std::norm(field.values[j]);
  }
  return std::sqrt(sum);
}

cplx integrate_ball(const BallGrid& grid, std::span<const cplx> values) {
  if (values.size() != grid.size()) throw std::invalid_argument("integrate_ball: size mismatch");
  cplx sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) sum += grid.weights[j] * values[j];
  return sum;
}

PatternSamples operator-(const PatternSamples& a, const PatternSamples& b) {
  if (!a.grid || !b.grid || !same_layout(*a.grid, *b.grid)) {
    throw std::invalid_argument("pattern difference: grids differ");
  }
  std::vector<cplx> d(a.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.values[i] - b.values[i];
  return {a.grid, std::move(d)};
}

bool same_layout(const BallGrid& a, const BallGrid& b) {
  return a.radial_count == b.radial_count && a.angular_order == b.angular_order &&
         a.radius == b.radius;
}

bool same_layout(const SphereGrid& a, const SphereGrid& b) {
  return a.exactness_degree == b.exactness_degree;
}

}  // namespace scatsyn
