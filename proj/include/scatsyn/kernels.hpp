#pragma once

// Data-parallel inner loops of the forward and synthesis paths. Every kernel
// has an OpenMP version and a plain serial version; the serial ones are the
// reference the parallel ones are tested (and benchmarked) against. Parallel
// loops only split independent outputs, so both produce identical bits.

#include <span>
#include <vector>

#include "scatsyn/grids.hpp"

namespace scatsyn {

enum class Execution { Serial, Parallel };

/// How the diagonal (node-on-node) entry of the weighted kernel is formed.
///  - Subtraction: diag = Phi(x_j) - sum_{i != j} g(x_j, x_i) v_i, where Phi is the
///    exact volume potential of the ball; the quadrature then only sees the
///    bounded integrand g(x_j, y)(f(y) - f(x_j)).
///  - EquivalentBall: diag = int over the ball of volume v_j of g, i.e. S(rho_j, k).
enum class SelfCellRule { Subtraction, EquivalentBall };

/// e^{ik|x-y|} / (4 pi |x-y|) for x != y.
cplx helmholtz_green(const Vec3& x, const Vec3& y, double k);

/// S(rho, k) = int_{|y|<rho} e^{ik|y|}/(4 pi |y|) dy = int_0^rho r e^{ikr} dr.
cplx self_cell_integral(double rho, double k);

/// Phi(r) = int_{|y|<b} g(x, y) dy for |x| = r <= b.
cplx ball_self_potential(double r, double k, double b);

namespace kernels {

/// Rows [row_begin, row_end) of the weighted kernel G(j, i) = g(x_j, x_i) v_i,
/// with the diagonal from `rule`. `out` is row-major with grid.size() columns and
/// (row_end - row_begin) rows.
void kernel_rows(const BallGrid& grid, double k, SelfCellRule rule, std::size_t row_begin,
                 std::size_t row_end, std::span<cplx> out, Execution exec);

/// Compressed kernel for product grids: G is block-circulant in the azimuthal
/// index, so only the entries against azimuth 0 of every ring are stored:
///   blocks[(a * rings + b) * n_phi + d] = G((a, d), (b, 0)).
std::vector<cplx> azimuthal_blocks(const BallGrid& grid, double k, SelfCellRule rule,
                                   Execution exec);

/// y = G x using the compressed blocks.
void azimuthal_apply(const BallGrid& grid, std::span<const cplx> blocks, std::span<const cplx> x,
                     std::span<cplx> y, Execution exec);

/// out_i = -(1/4 pi) sum_j e^{-i k dir_i . x_j} density_j v_j.
void far_field(const BallGrid& grid, std::span<const cplx> density, double k,
               std::span<const Vec3> directions, std::span<cplx> out, Execution exec);

}  // namespace kernels
}  // namespace scatsyn
