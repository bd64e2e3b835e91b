#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "scatsyn/io.hpp"

namespace scatsyn::cli {

namespace {

struct Target {
  HarmonicCoeffs coeffs;  // canonical coefficients, possibly above L_max
  PatternSamples samples;
};

io::RunConfig load_or_default(const std::string& path) {
  return path.empty() ? io::RunConfig{} : io::load_config(path);
}

Target load_target(const std::string& path, const io::RunConfig& cfg) {
  io::PatternInput in = io::load_pattern_input(path, cfg.sphere_order);
  Target t;
  t.samples = std::move(in.samples);
  if (in.from_coefficients) {
    t.coeffs = std::move(in.coeffs);
  } else {
    t.coeffs = analyze(t.samples, std::min(cfg.L_max, t.samples.grid->exactness_degree / 2));
  }
  return t;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

void echo_config(std::ostream& out, const io::RunConfig& cfg) { out << io::format_config(cfg, "config."); }

int cmd_synthesize(const std::string& pattern, const std::string& config, const std::string& out_path,
                   bool autoscale_flag, std::ostream& out, std::ostream& err) {
  const io::RunConfig cfg = load_or_default(config);
  const Target target = load_target(pattern, cfg);
  const int L_cap = std::min(cfg.L_max, target.coeffs.degree());
  const int L = std::min(choose_cutoff(target.coeffs, cfg.epsilon * cfg.epsilon / 4.0), L_cap);

  const BallGridPtr grid = build_ball_grid(cfg.radial_count, cfg.angular_order, 1.0);
  AuxiliaryDensity aux = synthesize_h(target.coeffs, cfg.k, L, grid);
  const SynthesisOptions opts = cfg.synthesis_options();
  PotentialResult pot = synthesize_q(aux.field, cfg.k, cfg.alpha, opts);

  double scale = 1.0;
  if (!pot.report.condition_passed && autoscale_flag) {
    const AutoscaleResult as = autoscale(aux.field, cfg.k, cfg.alpha, opts);
    if (as.found) {
      scale = as.scale;
      for (auto& v : aux.field.values) v *= scale;
      pot = synthesize_q(aux.field, cfg.k, cfg.alpha, opts);
    }
  }
  SynthesisReport rep = pot.report;
  rep.L_used = L;
  rep.tail_energy = tail_energy(target.coeffs, L) * scale * scale;
  rep.scale = scale;
  PatternSamples scaled = target.samples;
  for (auto& v : scaled.values) v *= scale;
  rep.predicted_residual = predicted_residual(aux.field, scaled, cfg.k);

  echo_config(out, cfg);
  io::write_report(out, rep);
  if (!rep.condition_passed) {
    err << "synthesize: denominator minimum " << io::format_double(rep.denom_min_modulus)
        << " is not above the threshold " << io::format_double(rep.denom_threshold)
        << "; rescale the pattern or pass --autoscale\n";
    return condition_failure;
  }
  auto file = open_output(out_path);
  io::write_field(file, pot.q);
  return ok;
}

int cmd_forward(const std::string& potential, const std::string& config, const std::string& out_path,
                std::ostream& out) {
  const io::RunConfig cfg = load_or_default(config);
  std::ifstream in(potential);
  if (!in) throw ParseError("cannot open '" + potential + "'");
  ComplexField q;
  try {
    q = io::read_field(in);
  } catch (const ParseError& e) {
    throw ParseError(potential + ": " + e.what());
  }
  if (q.grid->radial_count != cfg.radial_count || q.grid->angular_order != cfg.angular_order) {
    throw ParseError(potential + ": grid (radial_count=" + std::to_string(q.grid->radial_count) +
                     ", angular_order=" + std::to_string(q.grid->angular_order) +
                     ") does not match the config");
  }
  const ScatteringSolution sol = solve_scattering(q, cfg.k, cfg.alpha, cfg.solve_options());
  const PatternSamples a = scattering_amplitude(q, sol.u, cfg.k, build_sphere_grid(cfg.sphere_order));
  auto file = open_output(out_path);
  io::write_pattern(file, a);

  echo_config(out, cfg);
  out << "solve_method=" << to_string(sol.method) << '\n'
      << "relative_residual=" << io::format_double(sol.relative_residual) << '\n'
      << "condition_estimate=" << io::format_double(sol.condition_estimate) << '\n'
      << "iterations=" << sol.iterations << '\n'
      << "amplitude_norm=" << io::format_double(l2_norm_sphere(a)) << '\n';
  return ok;
}

int cmd_verify(const std::string& pattern, const std::string& config, std::ostream& out) {
  const io::RunConfig cfg = load_or_default(config);
  const Target target = load_target(pattern, cfg);
  const RoundTripReport rep =
      roundtrip(target.samples, cfg.epsilon, cfg.k, cfg.alpha, cfg.roundtrip_config());
  echo_config(out, cfg);
  io::write_report(out, rep);
  return rep.passed ? ok : not_verified;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(io::parse_double(item));
  return v;
}

int cmd_lemma1(const std::string& pattern, const std::string& config, const std::string& L_list,
               const std::string& out_path, std::ostream& out) {
  const io::RunConfig cfg = load_or_default(config);
  const Target target = load_target(pattern, cfg);
  std::vector<int> Ls;
  if (L_list.empty()) {
    Ls.resize(cfg.L_max + 1);
    std::iota(Ls.begin(), Ls.end(), 0);
  } else {
    for (double v : parse_list(L_list)) {
      if (v < 0 || v != static_cast<int>(v)) throw ParseError("--L expects non-negative integers");
      Ls.push_back(static_cast<int>(v));
    }
  }
  if (!std::is_sorted(Ls.begin(), Ls.end())) throw ParseError("--L values must be increasing");
  const auto grid = build_ball_grid(cfg.radial_count, cfg.angular_order, 1.0);
  const auto entries = lemma1_study(target.samples, Ls, cfg.k, grid);

  std::ostringstream csv;
  csv << "L,residual,h_norm,reachable\n";
  for (const auto& e : entries) {
    csv << e.L << ',' << io::format_double(e.residual) << ',' << io::format_double(e.h_norm) << ','
        << (e.reachable ? 1 : 0) << '\n';
  }
  if (out_path.empty()) {
    out << csv.str();
  } else {
    open_output(out_path) << csv.str();
  }
  return ok;
}

int cmd_smallness(const std::string& pattern, const std::string& config, const std::string& c_list,
                  double h_norm, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const io::RunConfig cfg = load_or_default(config);
  const auto grid = build_ball_grid(cfg.radial_count, cfg.angular_order, 1.0);
  ComplexField h;
  if (pattern.empty()) {
    h = smooth_bump(grid, h_norm);
  } else {
    const Target target = load_target(pattern, cfg);
    const int L = std::min(choose_cutoff(target.coeffs, cfg.epsilon * cfg.epsilon / 4.0),
                           std::min(cfg.L_max, target.coeffs.degree()));
    h = synthesize_h(target.coeffs, cfg.k, L, grid).field;
  }
  const std::vector<double> cs = parse_list(c_list);
  for (double c : cs) {
    if (!(c > 0.0)) throw ParseError("--c values must be positive");
  }
  const auto entries = smallness_probe(h, cs, cfg.k, cfg.alpha, cfg.solve_options());

  std::ostringstream csv;
  csv << "c,value_re,value_im,deviation,skipped\n";
  for (const auto& e : entries) {
    csv << io::format_double(e.c) << ',' << io::format_double(e.value.real()) << ','
        << io::format_double(e.value.imag()) << ',' << io::format_double(e.deviation) << ','
        << (e.skipped ? 1 : 0) << '\n';
    if (e.skipped) err << "c=" << io::format_double(e.c) << " skipped: " << e.note << '\n';
  }
  if (out_path.empty()) {
    out << csv.str();
  } else {
    open_output(out_path) << csv.str();
  }
  err << "slope=" << io::format_double(smallness_slope(entries)) << '\n';
  return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesis of scattering potentials with a prescribed far-field pattern", "scatsyn"};
  app.require_subcommand(1);

  std::string pattern, potential, config, out_path, L_list, c_list = "1e-2,1e-3,1e-4";
  bool autoscale_flag = false;
  double h_norm = 0.1;

  auto* syn = app.add_subcommand("synthesize", "Build a potential q from a target pattern");
  syn->add_option("pattern", pattern, "Coefficient or sample file")->required();
  syn->add_option("--config", config, "key=value run configuration");
  syn->add_option("--out", out_path, "Output potential field file")->required();
  syn->add_flag("--autoscale", autoscale_flag, "Shrink the pattern until the denominator condition holds");

  auto* fwd = app.add_subcommand("forward", "Scattering amplitude of a potential");
  fwd->add_option("potential", potential, "Potential field file")->required();
  fwd->add_option("--config", config, "key=value run configuration");
  fwd->add_option("--out", out_path, "Output pattern sample file")->required();

  auto* ver = app.add_subcommand("verify", "Synthesize, solve forward, and compare with the target");
  ver->add_option("pattern", pattern, "Coefficient or sample file")->required();
  ver->add_option("--config", config, "key=value run configuration");

  auto* study = app.add_subcommand("study", "Residual and smallness tables (CSV)");
  study->require_subcommand(1);
  auto* lem = study->add_subcommand("lemma1", "Residual of the truncated auxiliary density per cutoff");
  lem->add_option("--pattern", pattern, "Coefficient or sample file")->required();
  lem->add_option("--config", config, "key=value run configuration");
  lem->add_option("--L", L_list, "Comma-separated increasing cutoffs (default 0..L_max)");
  lem->add_option("--out", out_path, "CSV output file (default stdout)");
  auto* sm = study->add_subcommand("smallness", "v(c)/c against ||h||^2 for q = c conj(h) e^{-ik alpha.x}");
  sm->add_option("--pattern", pattern, "Derive h from this pattern instead of a smooth bump");
  sm->add_option("--config", config, "key=value run configuration");
  sm->add_option("--c", c_list, "Comma-separated positive scales");
  sm->add_option("--h-norm", h_norm, "L2 norm of the smooth bump h")->check(CLI::PositiveNumber);
  sm->add_option("--out", out_path, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return parse_error;
  }

  try {
    if (*syn) return cmd_synthesize(pattern, config, out_path, autoscale_flag, out, err);
    if (*fwd) return cmd_forward(potential, config, out_path, out);
    if (*ver) return cmd_verify(pattern, config, out);
    if (*lem) return cmd_lemma1(pattern, config, L_list, out_path, out);
    if (*sm) return cmd_smallness(pattern, config, c_list, h_norm, out_path, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return parse_error;
  } catch (const ConditionFailure& e) {
    err << "condition failure: " << e.what() << '\n';
    return condition_failure;
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << '\n';
    return solver_failure;
  } catch (const UnreachableDegree& e) {
    err << "unreachable degree: " << e.what() << '\n';
    return solver_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return not_verified;
  }
  return parse_error;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("scatsyn");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace scatsyn::cli
