#pragma once

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "scatsyn/grids.hpp"
#include "scatsyn/kernels.hpp"

namespace scatsyn {

using DenseMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense weighted kernel G with G(j, i) = g(x_j, x_i) v_i off the diagonal.
DenseMatrix assemble_kernel(const BallGrid& grid, double k, SelfCellRule rule,
                            Execution exec = Execution::Parallel);

/// Discretized T of u = u0 - T u: T = G diag(q).
struct OperatorMatrix {
  DenseMatrix matrix;
  double k = 0.0;
  SelfCellRule rule = SelfCellRule::Subtraction;
  ComplexField q;
};

OperatorMatrix assemble_T(const ComplexField& q, double k,
                          SelfCellRule rule = SelfCellRule::Subtraction);

/// The weighted kernel G as a linear map, stored densely for small grids and
/// in azimuthally compressed form for large ones. Synthesis and the forward
/// solve share this type so both see the same discrete operator.
class KernelOperator {
 public:
  KernelOperator(BallGridPtr grid, double k, SelfCellRule rule, std::size_t dense_limit);

  std::vector<cplx> apply(std::span<const cplx> x) const;
  bool is_dense() const noexcept { return dense_ != nullptr; }
  const DenseMatrix& dense() const { return *dense_; }
  const BallGrid& grid() const noexcept { return *grid_; }
  double wavenumber() const noexcept { return k_; }

 private:
  BallGridPtr grid_;
  double k_;
  std::shared_ptr<DenseMatrix> dense_;
  std::vector<cplx> blocks_;
};

/// max|q| * b^2 / 2: bounds the sup-norm of T since sup_x int_{B_b} dy / (4 pi |x-y|) = b^2/2.
double operator_norm_bound(const ComplexField& q);

enum class SolveMethod { Auto, Direct, Neumann, Gmres };

struct SolveOptions {
  SolveMethod method = SolveMethod::Auto;
  SelfCellRule self_cell = SelfCellRule::Subtraction;
  /// Auto runs GMRES on the compressed kernel and falls back to a dense LU
  /// when GMRES stalls and the grid has at most this many nodes.
  std::size_t dense_limit = 6000;
  double residual_tol = 1e-10;
  double iterative_tol = 1e-13;
  int max_iterations = 400;
  int gmres_restart = 40;
  /// Direct solves with reciprocal condition below this are reported as singular.
  double min_rcond = 1e-14;
};

struct ScatteringSolution {
  ComplexField u;
  SolveMethod method = SolveMethod::Direct;
  double relative_residual = 0.0;
  /// 1/rcond from the LU factorization; NaN for iterative methods.
  double condition_estimate = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
};

/// u0 = e^{i k alpha.x} on the grid nodes.
ComplexField incident_wave(BallGridPtr grid, double k, const Vec3& alpha);

/// Solves (I + T) u = u0. Throws SolverFailure when the system is numerically
/// singular, the residual check fails, or (Neumann) the contraction bound is not met.
ScatteringSolution solve_scattering(const ComplexField& q, double k, const Vec3& alpha,
                                    const SolveOptions& opts = {});

/// A(a') = -(1/4 pi) sum_j e^{-i k a'.x_j} q_j u_j v_j for every node of `directions`.
PatternSamples scattering_amplitude(const ComplexField& q, const ComplexField& u, double k,
                                    SphereGridPtr directions);

/// Far field of a density: -(1/4 pi) int e^{-i k a'.x} rho(x) dx.
PatternSamples far_field_of_density(const ComplexField& rho, double k, SphereGridPtr directions);

const char* to_string(SolveMethod m);
const char* to_string(SelfCellRule r);

}  // namespace scatsyn
