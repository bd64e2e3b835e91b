#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scatsyn {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Returns a / |a|; throws std::invalid_argument for the zero vector.
Vec3 normalized(const Vec3& a);

/// Polar angle in [0, pi] and azimuth in [0, 2 pi) of a nonzero vector.
struct SphericalAngles {
  double theta = 0.0;
  double phi = 0.0;
};
SphericalAngles angles_of(const Vec3& v);
Vec3 unit_vector(double theta, double phi);

// Error taxonomy. The CLI maps each class to a distinct exit code.

/// Malformed input file or config; carries the offending line number (0 if none).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// The synthesis denominator u0 - int g h came too close to zero somewhere in D.
class ConditionFailure : public std::runtime_error {
 public:
  ConditionFailure(const std::string& what, double min_modulus)
      : std::runtime_error(what), min_modulus_(min_modulus) {}
  double min_modulus() const noexcept { return min_modulus_; }

 private:
  double min_modulus_;
};

/// Linear solve failed: singular, ill-conditioned, or an iteration did not converge.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// A harmonic degree whose radial moment is below the numerical floor at this k.
class UnreachableDegree : public std::domain_error {
 public:
  UnreachableDegree(const std::string& what, int degree)
      : std::domain_error(what), degree_(degree) {}
  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

}  // namespace scatsyn
