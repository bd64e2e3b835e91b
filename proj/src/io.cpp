#include "scatsyn/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>

namespace scatsyn::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <class Int>
Int parse_int(std::string_view text, int line) {
  text = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("expected an integer, got '" + std::string(text) + "'", line);
  }
  return v;
}

// Reads non-empty, non-comment lines while tracking the physical line number.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& out) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      const std::string_view t = trim(raw);
      if (t.empty() || t.front() == '#') continue;
      out.assign(t);
      return true;
    }
    return false;
  }
  int line() const noexcept { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

// "key=value key=value" header.
std::map<std::string, std::string, std::less<>> parse_header(std::string_view text, int line) {
  std::map<std::string, std::string, std::less<>> kv;
  std::istringstream ss{std::string(text)};
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("malformed header field '" + tok + "'", line);
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

const std::string& header_field(const std::map<std::string, std::string, std::less<>>& kv,
                                std::string_view key, int line) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ParseError("header is missing '" + std::string(key) + "'", line);
  return it->second;
}

std::vector<double> parse_row(std::string_view text, std::size_t expected, int line) {
  const auto parts = split(text, ',');
  if (parts.size() != expected) {
    throw ParseError("expected " + std::to_string(expected) + " comma-separated fields, got " +
                         std::to_string(parts.size()),
                     line);
  }
  std::vector<double> v;
  v.reserve(expected);
  for (auto p : parts) v.push_back(parse_double(p, line));
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

SolveMethod parse_solver(std::string_view s, int line) {
  if (s == "auto") return SolveMethod::Auto;
  if (s == "direct") return SolveMethod::Direct;
  if (s == "neumann") return SolveMethod::Neumann;
  if (s == "gmres") return SolveMethod::Gmres;
  throw ParseError("unknown solver '" + std::string(s) + "'", line);
}

SelfCellRule parse_self_cell(std::string_view s, int line) {
  if (s == "subtraction") return SelfCellRule::Subtraction;
  if (s == "equivalent-ball") return SelfCellRule::EquivalentBall;
  throw ParseError("unknown self_cell rule '" + std::string(s) + "'", line);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, int line) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("expected a real number, got '" + std::string(text) + "'", line);
  }
  return v;
}

SynthesisOptions RunConfig::synthesis_options() const {
  SynthesisOptions o;
  o.denom_threshold = denom_threshold;
  o.self_cell = self_cell;
  return o;
}

SolveOptions RunConfig::solve_options() const {
  SolveOptions o;
  o.method = solver;
  o.self_cell = self_cell;
  return o;
}

RoundTripConfig RunConfig::roundtrip_config() const {
  RoundTripConfig c;
  c.radial_count = radial_count;
  c.angular_order = angular_order;
  c.L_max = L_max;
  c.synthesis = synthesis_options();
  c.solve = solve_options();
  return c;
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  LineReader reader(in);
  std::string text;
  std::map<std::string, int, std::less<>> seen;
  while (reader.next(text)) {
    const int line = reader.line();
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line);
    const std::string key(trim(std::string_view(text).substr(0, eq)));
    const std::string_view value = trim(std::string_view(text).substr(eq + 1));
    if (!seen.emplace(key, line).second) throw ParseError("duplicate key '" + key + "'", line);

    if (key == "k") {
      cfg.k = parse_double(value, line);
      if (!(cfg.k > 0.0) || !std::isfinite(cfg.k)) throw ParseError("k must be positive", line);
    } else if (key == "alpha") {
      const auto v = parse_row(value, 3, line);
      const Vec3 a{v[0], v[1], v[2]};
      if (!(norm(a) > 0.0) || !std::isfinite(norm(a))) throw ParseError("alpha must be a nonzero vector", line);
      cfg.alpha = normalized(a);
    } else if (key == "epsilon") {
      cfg.epsilon = parse_double(value, line);
      if (!(cfg.epsilon > 0.0)) throw ParseError("epsilon must be positive", line);
    } else if (key == "L_max") {
      cfg.L_max = parse_int<int>(value, line);
      if (cfg.L_max < 0) throw ParseError("L_max must be >= 0", line);
    } else if (key == "sphere_order") {
      cfg.sphere_order = parse_int<int>(value, line);
      if (cfg.sphere_order < 2) throw ParseError("sphere_order must be >= 2", line);
    } else if (key == "radial_count") {
      cfg.radial_count = parse_int<int>(value, line);
      if (cfg.radial_count < 2) throw ParseError("radial_count must be >= 2", line);
    } else if (key == "angular_order") {
      cfg.angular_order = parse_int<int>(value, line);
      if (cfg.angular_order < 2) throw ParseError("angular_order must be >= 2", line);
    } else if (key == "denom_threshold") {
      cfg.denom_threshold = parse_double(value, line);
      if (!(cfg.denom_threshold >= 0.0)) throw ParseError("denom_threshold must be >= 0", line);
    } else if (key == "seed") {
      cfg.seed = parse_int<std::uint64_t>(value, line);
    } else if (key == "solver") {
      cfg.solver = parse_solver(value, line);
    } else if (key == "self_cell") {
      cfg.self_cell = parse_self_cell(value, line);
    } else {
      throw ParseError("unknown key '" + key + "'", line);
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  auto in = open_input(path);
  try {
    return parse_config(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string format_config(const RunConfig& cfg, std::string_view prefix) {
  std::ostringstream out;
  const std::string p(prefix);
  out << p << "k=" << format_double(cfg.k) << '\n'
      << p << "alpha=" << format_double(cfg.alpha.x) << ',' << format_double(cfg.alpha.y) << ','
      << format_double(cfg.alpha.z) << '\n'
      << p << "epsilon=" << format_double(cfg.epsilon) << '\n'
      << p << "L_max=" << cfg.L_max << '\n'
      << p << "sphere_order=" << cfg.sphere_order << '\n'
      << p << "radial_count=" << cfg.radial_count << '\n'
      << p << "angular_order=" << cfg.angular_order << '\n'
      << p << "denom_threshold=" << format_double(cfg.denom_threshold) << '\n'
      << p << "seed=" << cfg.seed << '\n'
      << p << "solver=" << to_string(cfg.solver) << '\n'
      << p << "self_cell=" << to_string(cfg.self_cell) << '\n';
  return out.str();
}

void write_coeffs(std::ostream& out, const HarmonicCoeffs& c) {
  out << "L=" << c.degree() << " convention=" << coeff_convention << '\n';
  for (int l = 0; l <= c.degree(); ++l) {
    for (int m = -l; m <= l; ++m) {
      const cplx v = c(l, m);
      out << l << ',' << m << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
}

HarmonicCoeffs read_coeffs(std::istream& in) {
  LineReader reader(in);
  std::string text;
  if (!reader.next(text)) throw ParseError("empty coefficient file", reader.line());
  const int hline = reader.line();
  const auto header = parse_header(text, hline);
  const int L = parse_int<int>(header_field(header, "L", hline), hline);
  if (L < 0) throw ParseError("L must be >= 0", hline);
  if (header_field(header, "convention", hline) != coeff_convention) {
    throw ParseError("unsupported convention '" + header.at("convention") + "'", hline);
  }
  HarmonicCoeffs c(L);
  std::vector<bool> seen(c.flat().size(), false);
  while (reader.next(text)) {
    const int line = reader.line();
    const auto parts = split(text, ',');
    if (parts.size() != 4) throw ParseError("expected l,m,re,im", line);
    const int l = parse_int<int>(parts[0], line);
    const int m = parse_int<int>(parts[1], line);
    if (l < 0 || l > L || m < -l || m > l) {
      throw ParseError("index (" + std::to_string(l) + "," + std::to_string(m) + ") outside degree " +
                           std::to_string(L),
                       line);
    }
    const int j = HarmonicIndex(l, m).flat();
    if (seen[j]) throw ParseError("duplicate coefficient", line);
    seen[j] = true;
    c(l, m) = cplx(parse_double(parts[2], line), parse_double(parts[3], line));
  }
  return c;
}

void write_pattern(std::ostream& out, const PatternSamples& p) {
  const SphereGrid& g = *p.grid;
  out << "sphere_order=" << g.exactness_degree << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << format_double(g.theta[i]) << ',' << format_double(g.phi[i]) << ','
        << format_double(p.values[i].real()) << ',' << format_double(p.values[i].imag()) << '\n';
  }
}

PatternSamples read_pattern(std::istream& in) {
  LineReader reader(in);
  std::string text;
  if (!reader.next(text)) throw ParseError("empty pattern file", reader.line());
  const int hline = reader.line();
  const auto header = parse_header(text, hline);
  const int order = parse_int<int>(header_field(header, "sphere_order", hline), hline);
  if (order < 2) throw ParseError("sphere_order must be >= 2", hline);
  auto grid = build_sphere_grid(order);
  std::vector<cplx> values;
  values.reserve(grid->size());
  while (reader.next(text)) {
    const int line = reader.line();
    if (values.size() == grid->size()) throw ParseError("more rows than grid nodes", line);
    const auto row = parse_row(text, 4, line);
    const std::size_t i = values.size();
    if (std::abs(row[0] - grid->theta[i]) > 1e-12 || std::abs(row[1] - grid->phi[i]) > 1e-12) {
      throw ParseError("node angles do not match the sphere_order grid", line);
    }
    values.emplace_back(row[2], row[3]);
  }
  if (values.size() != grid->size()) {
    throw ParseError("expected " + std::to_string(grid->size()) + " rows, got " +
                         std::to_string(values.size()),
                     reader.line());
  }
  return PatternSamples(std::move(grid), std::move(values));
}

void write_field(std::ostream& out, const ComplexField& f) {
  const BallGrid& g = *f.grid;
  out << "radial_count=" << g.radial_count << " angular_order=" << g.angular_order
      << " b=" << format_double(g.radius) << '\n';
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Vec3& x = g.nodes[j];
    out << format_double(x.x) << ',' << format_double(x.y) << ',' << format_double(x.z) << ','
        << format_double(f.values[j].real()) << ',' << format_double(f.values[j].imag()) << '\n';
  }
}

ComplexField read_field(std::istream& in) {
  LineReader reader(in);
  std::string text;
  if (!reader.next(text)) throw ParseError("empty field file", reader.line());
  const int hline = reader.line();
  const auto header = parse_header(text, hline);
  const int nr = parse_int<int>(header_field(header, "radial_count", hline), hline);
  const int na = parse_int<int>(header_field(header, "angular_order", hline), hline);
  const double b = parse_double(header_field(header, "b", hline), hline);
  if (nr < 2 || na < 2 || !(b > 0.0)) throw ParseError("invalid grid parameters", hline);
  auto grid = build_ball_grid(nr, na, b);
  std::vector<cplx> values;
  values.reserve(grid->size());
  const double tol = 1e-12 * b;
  while (reader.next(text)) {
    const int line = reader.line();
    if (values.size() == grid->size()) throw ParseError("more rows than grid nodes", line);
    const auto row = parse_row(text, 5, line);
    const Vec3& x = grid->nodes[values.size()];
    if (std::abs(row[0] - x.x) > tol || std::abs(row[1] - x.y) > tol || std::abs(row[2] - x.z) > tol) {
      throw ParseError("node coordinates do not match the header grid", line);
    }
    values.emplace_back(row[3], row[4]);
  }
  if (values.size() != grid->size()) {
    throw ParseError("expected " + std::to_string(grid->size()) + " rows, got " +
                         std::to_string(values.size()),
                     reader.line());
  }
  return ComplexField(std::move(grid), std::move(values));
}

PatternInput read_pattern_input(std::istream& in, int sphere_order) {
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::istringstream probe(content);
  LineReader reader(probe);
  std::string first;
  if (!reader.next(first)) throw ParseError("empty pattern file", reader.line());
  std::istringstream body(content);
  PatternInput out;
  if (first.rfind("L=", 0) == 0) {
    out.from_coefficients = true;
    out.coeffs = read_coeffs(body);
    out.samples = synthesize_pattern(out.coeffs, build_sphere_grid(sphere_order));
  } else if (first.rfind("sphere_order=", 0) == 0) {
    out.samples = read_pattern(body);
  } else {
    throw ParseError("unrecognized pattern header", reader.line());
  }
  return out;
}

PatternInput load_pattern_input(const std::string& path, int sphere_order) {
  auto in = open_input(path);
  try {
    return read_pattern_input(in, sphere_order);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_report(std::ostream& out, const SynthesisReport& r) {
  out << "L_used=" << r.L_used << '\n'
      << "tail_energy=" << format_double(r.tail_energy) << '\n'
      << "predicted_residual=" << format_double(r.predicted_residual) << '\n'
      << "denom_min_modulus=" << format_double(r.denom_min_modulus) << '\n'
      << "denom_threshold=" << format_double(r.denom_threshold) << '\n'
      << "scale=" << format_double(r.scale) << '\n'
      << "condition=" << (r.condition_passed ? "pass" : "fail") << '\n';
}

void write_report(std::ostream& out, const RoundTripReport& r) {
  out << "epsilon_target=" << format_double(r.epsilon_target) << '\n'
      << "achieved_error=" << format_double(r.achieved_error) << '\n'
      << "L_used=" << r.L_used << '\n'
      << "tail_energy=" << format_double(r.tail_energy) << '\n'
      << "predicted_residual=" << format_double(r.predicted_residual) << '\n'
      << "forward_discrepancy=" << format_double(r.forward_discrepancy) << '\n'
      << "denom_min_modulus=" << format_double(r.denom_min_modulus) << '\n'
      << "denom_min_modulus_quadrature=" << format_double(r.denom_min_modulus_quadrature) << '\n'
      << "qu_minus_h_max=" << format_double(r.qu_minus_h_max) << '\n'
      << "solver_residual=" << format_double(r.solver_residual) << '\n'
      << "solve_method=" << r.solve_method << '\n'
      << "radial_count=" << r.radial_count << '\n'
      << "angular_order=" << r.angular_order << '\n'
      << "sphere_order=" << r.sphere_order << '\n'
      << "ball_nodes=" << r.ball_nodes << '\n'
      << "result=" << (r.passed ? "pass" : "fail") << '\n';
}

}  // namespace scatsyn::io
