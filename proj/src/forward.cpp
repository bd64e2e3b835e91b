#include "scatsyn/forward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scatsyn {

namespace {

using Vec = Eigen::VectorXcd;

Eigen::Map<const Vec> as_eigen(std::span<const cplx> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

void require_same_grid(const ComplexField& a, const ComplexField& b, const char* who) {
  if (a.grid != b.grid && !(a.grid && b.grid && same_layout(*a.grid, *b.grid))) {
    throw std::invalid_argument(std::string(who) + ": fields live on different grids");
  }
}

}  // namespace

DenseMatrix assemble_kernel(const BallGrid& grid, double k, SelfCellRule rule, Execution exec) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  DenseMatrix g(n, n);
  kernels::kernel_rows(grid, k, rule, 0, grid.size(), {g.data(), static_cast<std::size_t>(n * n)},
                       exec);
  return g;
}

OperatorMatrix assemble_T(const ComplexField& q, double k, SelfCellRule rule) {
  OperatorMatrix t;
  t.matrix = assemble_kernel(*q.grid, k, rule);
  t.matrix *= as_eigen(q.values).asDiagonal();
  t.k = k;
  t.rule = rule;
  t.q = q;
  return t;
}

KernelOperator::KernelOperator(BallGridPtr grid, double k, SelfCellRule rule,
                               std::size_t dense_limit)
    : grid_(std::move(grid)), k_(k) {
  if (grid_->size() <= dense_limit) {
    dense_ = std::make_shared<DenseMatrix>(assemble_kernel(*grid_, k, rule));
  } else {
    blocks_ = kernels::azimuthal_blocks(*grid_, k, rule, Execution::Parallel);
  }
}

std::vector<cplx> KernelOperator::apply(std::span<const cplx> x) const {
  if (x.size() != grid_->size()) throw std::invalid_argument("KernelOperator::apply: size mismatch");
  std::vector<cplx> y(x.size());
  if (dense_) {
    Eigen::Map<Vec>(y.data(), static_cast<Eigen::Index>(y.size())).noalias() = *dense_ * as_eigen(x);
  } else {
    kernels::azimuthal_apply(*grid_, blocks_, x, y, Execution::Parallel);
  }
  return y;
}

double operator_norm_bound(const ComplexField& q) {
  double m = 0.0;
  for (const cplx& v : q.values) m = std::max(m, std::abs(v));
  const double b = q.grid->radius;
  return m * b * b / 2.0;
}

ComplexField incident_wave(BallGridPtr grid, double k, const Vec3& alpha) {
  const Vec3 a = normalized(alpha);
  std::vector<cplx> u0(grid->size());
  for (std::size_t j = 0; j < u0.size(); ++j) u0[j] = std::polar(1.0, k * dot(a, grid->nodes[j]));
  return {std::move(grid), std::move(u0)};
}

namespace {

struct GmresOutcome {
  Vec x;
  int iterations = 0;
  bool converged = false;
};

// Restarted GMRES with modified Gram-Schmidt and complex Givens rotations.
template <class Apply>
GmresOutcome gmres(const Apply& apply, const Vec& rhs, Vec x, double tol, int restart, int max_iter) {
  GmresOutcome out;
  const double target = tol * rhs.norm();
  Vec r = rhs - apply(x);
  double beta = r.norm();
  int total = 0;
  while (beta > target && total < max_iter) {
    const int m = std::min(restart, max_iter - total);
    std::vector<Vec> basis;
    basis.reserve(m + 1);
    basis.push_back(r / beta);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m);
    std::vector<double> cs(m);
    std::vector<cplx> sn(m);
    Vec g = Vec::Zero(m + 1);
    g(0) = beta;
    int used = 0;
    for (int j = 0; j < m; ++j) {
      Vec w = apply(basis[j]);
      for (int i = 0; i <= j; ++i) {
        h(i, j) = basis[i].dot(w);
        w -= h(i, j) * basis[i];
      }
      h(j + 1, j) = w.norm();
      for (int i = 0; i < j; ++i) {
        const cplx t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
        h(i + 1, j) = -std::conj(sn[i]) * h(i, j) + cs[i] * h(i + 1, j);
        h(i, j) = t;
      }
      const cplx h1 = h(j, j), h2 = h(j + 1, j);
      const double denom = std::hypot(std::abs(h1), std::abs(h2));
      if (denom == 0.0) {
        used = j;
        break;
      }
      if (std::abs(h1) == 0.0) {
        cs[j] = 0.0;
        sn[j] = 1.0;
      } else {
        cs[j] = std::abs(h1) / denom;
        sn[j] = (h1 / std::abs(h1)) * std::conj(h2) / denom;
      }
      h(j, j) = cs[j] * h1 + sn[j] * h2;
      h(j + 1, j) = 0.0;
      g(j + 1) = -std::conj(sn[j]) * g(j);
      g(j) = cs[j] * g(j);
      used = j + 1;
      ++total;
      const double hnext = std::abs(h2);
      if (std::abs(g(j + 1)) <= target || hnext == 0.0) break;
      basis.push_back(w / hnext);
    }
    if (used == 0) break;
    const Vec y = h.topLeftCorner(used, used).triangularView<Eigen::Upper>().solve(g.head(used));
    for (int i = 0; i < used; ++i) x += y(i) * basis[i];
    r = rhs - apply(x);
    beta = r.norm();
  }
  out.x = std::move(x);
  out.iterations = total;
  out.converged = beta <= target;
  return out;
}

}  // namespace

ScatteringSolution solve_scattering(const ComplexField& q, double k, const Vec3& alpha,
                                    const SolveOptions& opts) {
  const BallGridPtr& grid = q.grid;
  const std::size_t n = grid->size();
  const ComplexField u0 = incident_wave(grid, k, alpha);
  const Eigen::Map<const Vec> rhs = as_eigen(u0.values);
  const Eigen::Map<const Vec> qv = as_eigen(q.values);

  ScatteringSolution sol;

  const auto solve_direct = [&]() -> Vec {
    DenseMatrix m = assemble_kernel(*grid, k, opts.self_cell);
    m *= qv.asDiagonal();
    m.diagonal().array() += 1.0;
    const Eigen::PartialPivLU<DenseMatrix> lu(m);
    const double rcond = lu.rcond();
    sol.condition_estimate = (rcond > 0.0) ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(rcond >= opts.min_rcond)) {
      throw SolverFailure("solve_scattering: I + T is numerically singular (condition estimate " +
                              std::to_string(sol.condition_estimate) + ")",
                          sol.condition_estimate);
    }
    Vec x = lu.solve(rhs);
    sol.relative_residual = (m * x - rhs).norm() / rhs.norm();
    sol.iterations = 0;
    return x;
  };

  // iterative paths always use the azimuthally compressed kernel
  const auto solve_iterative = [&](SolveMethod method) -> Vec {
    const KernelOperator op(grid, k, opts.self_cell, 0);
    const auto apply = [&](const Vec& x) -> Vec {
      const Vec qx = qv.cwiseProduct(x);
      const auto gx = op.apply({qx.data(), n});
      return x + as_eigen(gx);
    };
    Vec x;
    if (method == SolveMethod::Neumann) {
      x = rhs;
      const double target = opts.iterative_tol * rhs.norm();
      int it = 0;
      for (; it < opts.max_iterations; ++it) {
        const Vec qu = qv.cwiseProduct(x);
        const auto tu = op.apply({qu.data(), n});
        const Vec next = rhs - as_eigen(tu);
        const double step = (next - x).norm();
        x = next;
        if (step <= target) break;
      }
      sol.iterations = it + 1;
    } else {
      auto res = gmres(apply, Vec(rhs), Vec(rhs), opts.iterative_tol, opts.gmres_restart,
                       opts.max_iterations);
      x = std::move(res.x);
      sol.iterations = res.iterations;
    }
    sol.relative_residual = (apply(x) - rhs).norm() / rhs.norm();
    sol.condition_estimate = std::numeric_limits<double>::quiet_NaN();
    return x;
  };

  Vec u;
  switch (opts.method) {
    case SolveMethod::Direct:
      sol.method = SolveMethod::Direct;
      u = solve_direct();
      break;
    case SolveMethod::Neumann: {
      const double bound = operator_norm_bound(q);
      if (!(bound < 0.9)) {
        throw SolverFailure("solve_scattering: Neumann series needs operator_norm_bound < 0.9, got " +
                                std::to_string(bound),
                            std::numeric_limits<double>::quiet_NaN());
      }
      sol.method = SolveMethod::Neumann;
      u = solve_iterative(SolveMethod::Neumann);
      break;
    }
    case SolveMethod::Gmres:
      sol.method = SolveMethod::Gmres;
      u = solve_iterative(SolveMethod::Gmres);
      break;
    case SolveMethod::Auto:
      // GMRES first; dense LU only as a fallback and only when it fits
      sol.method = SolveMethod::Gmres;
      u = solve_iterative(SolveMethod::Gmres);
      if (!(sol.relative_residual <= opts.residual_tol) && n <= opts.dense_limit) {
        sol.method = SolveMethod::Direct;
        u = solve_direct();
      }
      break;
  }
  if (!(sol.relative_residual <= opts.residual_tol)) {
    throw SolverFailure("solve_scattering: relative residual " +
                            std::to_string(sol.relative_residual) + " exceeds tolerance",
                        sol.condition_estimate);
  }
  sol.u = ComplexField(grid, std::vector<cplx>(u.data(), u.data() + n));
  return sol;
}

PatternSamples far_field_of_density(const ComplexField& rho, double k, SphereGridPtr directions) {
  std::vector<cplx> out(directions->size());
  kernels::far_field(*rho.grid, rho.values, k, directions->nodes, out, Execution::Parallel);
  return {std::move(directions), std::move(out)};
}

PatternSamples scattering_amplitude(const ComplexField& q, const ComplexField& u, double k,
                                    SphereGridPtr directions) {
  require_same_grid(q, u, "scattering_amplitude");
  std::vector<cplx> qu(q.values.size());
  for (std::size_t j = 0; j < qu.size(); ++j) qu[j] = q.values[j] * u.values[j];
  return far_field_of_density(ComplexField(q.grid, std::move(qu)), k, std::move(directions));
}

const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::Auto: return "auto";
    case SolveMethod::Direct: return "direct";
    case SolveMethod::Neumann: return "neumann";
    case SolveMethod::Gmres: return "gmres";
  }
  return "?";
}

const char* to_string(SelfCellRule r) {
  return r == SelfCellRule::Subtraction ? "subtraction" : "equivalent-ball";
}

}  // namespace scatsyn
