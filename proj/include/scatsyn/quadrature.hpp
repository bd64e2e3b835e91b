#pragma once

#include <functional>
#include <vector>

namespace scatsyn::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

struct AdaptiveOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-14;
  int max_subdivisions = 4000;
};

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of a smooth real function.
/// An interval is accepted once the summed error estimate drops below
/// max(abs_tol, rel_tol * |integral|).
AdaptiveResult gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                             const AdaptiveOptions& opts = {});

}  // namespace scatsyn::quad
