#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "scatsyn/harmonics.hpp"
#include "scatsyn/verify.hpp"

namespace scatsyn::io {

/// Flat key=value run configuration. Unknown keys are a ParseError.
struct RunConfig {
  double k = 1.0;
  Vec3 alpha{0.0, 0.0, 1.0};
  double epsilon = 2.5e-3;
  int L_max = 8;
  int sphere_order = 16;
  int radial_count = 24;
  int angular_order = 16;
  double denom_threshold = 0.1;
  std::uint64_t seed = 1;
  SolveMethod solver = SolveMethod::Auto;
  SelfCellRule self_cell = SelfCellRule::Subtraction;

  SynthesisOptions synthesis_options() const;
  SolveOptions solve_options() const;
  RoundTripConfig roundtrip_config() const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
/// Canonical key=value rendering (every key, fixed order).
std::string format_config(const RunConfig& cfg, std::string_view prefix = "");

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_double(double v);
double parse_double(std::string_view text, int line = 0);

inline constexpr std::string_view coeff_convention = "orthonormal-cs";

// Coefficient file: "L=<int> convention=orthonormal-cs", then rows "l,m,re,im".
void write_coeffs(std::ostream& out, const HarmonicCoeffs& c);
HarmonicCoeffs read_coeffs(std::istream& in);

// Pattern sample file: "sphere_order=<int>", then rows "theta,phi,re,im".
void write_pattern(std::ostream& out, const PatternSamples& p);
PatternSamples read_pattern(std::istream& in);

// Field file: "radial_count=<int> angular_order=<int> b=<real>", then rows "x,y,z,re,im".
void write_field(std::ostream& out, const ComplexField& f);
ComplexField read_field(std::istream& in);

/// A target pattern loaded from either the coefficient or the sample form.
struct PatternInput {
  bool from_coefficients = false;
  HarmonicCoeffs coeffs;
  PatternSamples samples;
};

/// Dispatches on the header. Coefficient input is sampled on a grid of
/// `sphere_order`; sample input keeps its own grid.
PatternInput read_pattern_input(std::istream& in, int sphere_order);
PatternInput load_pattern_input(const std::string& path, int sphere_order);

void write_report(std::ostream& out, const SynthesisReport& r);
void write_report(std::ostream& out, const RoundTripReport& r);

}  // namespace scatsyn::io
