#include "scatsyn/kernels.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace scatsyn {

cplx helmholtz_green(const Vec3& x, const Vec3& y, double k) {
  const double d = norm(x - y);
  return std::polar(1.0 / (4.0 * pi * d), k * d);
}

cplx self_cell_integral(double rho, double k) {
  const double kr = k * rho;
  if (std::abs(kr) < 0.5) {
    // rho^2 sum_{m>=2} z^{m-2} (m-1)/m!, z = i k rho
    const cplx z{0.0, kr};
    cplx term = 1.0;  // z^{m-2}
    double fact = 2.0;  // m!
    cplx sum = 0.0;
    for (int m = 2; m < 30; ++m) {
      if (m > 2) {
        term *= z;
        fact *= m;
      }
      sum += term * ((m - 1.0) / fact);
    }
    return rho * rho * sum;
  }
  const cplx e = std::polar(1.0, kr);
  return rho * e / (I * k) + (e - 1.0) / (k * k);
}

cplx ball_self_potential(double r, double k, double b) {
  if (k * b < 0.5) {
    // Phi = sum_{m>=2} c_m k^{m-2} with c the Cauchy product of
    // (1 - ikb) e^{ikb} = sum (ib)^n (1-n)/n! k^n and sinc(kr) = sum (-1)^j r^{2j}/(2j+1)! k^{2j}.
    constexpr int terms = 40;
    std::array<cplx, terms> a{};
    std::array<double, terms> s{};
    cplx ib_pow = 1.0;
    double fact = 1.0;
    for (int n = 0; n < terms; ++n) {
      if (n > 0) {
        ib_pow *= cplx{0.0, b};
        fact *= n;
      }
      a[n] = ib_pow * ((1.0 - n) / fact);
    }
    double r_pow = 1.0, odd_fact = 1.0;
    for (int n = 0; n < terms; n += 2) {
      if (n > 0) {
        r_pow *= -r * r;
        odd_fact *= n * (n + 1.0);
      }
      s[n] = r_pow / odd_fact;
    }
    cplx sum = 0.0;
    double k_pow = 1.0;
    for (int m = 2; m < terms; ++m) {
      cplx c = 0.0;
      for (int n = 0; n <= m; ++n) c += a[n] * s[m - n];
      sum += c * k_pow;
      k_pow *= k;
    }
    return sum;
  }
  const double sinc = (r > 0.0) ? std::sin(k * r) / (k * r) : 1.0;
  const cplx lead = cplx{1.0, -k * b} * std::polar(1.0, k * b);
  return (lead * sinc - 1.0) / (k * k);
}

namespace kernels {

namespace {

// Complex multiply-accumulate on raw parts; std::complex operator* carries
// NaN-recovery branches that block vectorization.
inline void cmac(double& re, double& im, const cplx& a, const cplx& b) {
  re += a.real() * b.real() - a.imag() * b.imag();
  im += a.real() * b.imag() + a.imag() * b.real();
}

void one_row(const BallGrid& grid, double k, SelfCellRule rule, std::size_t j, cplx* row) {
  const std::size_t n = grid.size();
  const Vec3 xj = grid.nodes[j];
  double sum_re = 0.0, sum_im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == j) continue;
    const double d = norm(xj - grid.nodes[i]);
    const double scale = grid.weights[i] / (4.0 * pi * d);
    const double c = std::cos(k * d) * scale;
    const double s = std::sin(k * d) * scale;
    row[i] = {c, s};
    sum_re += c;
    sum_im += s;
  }
  if (rule == SelfCellRule::EquivalentBall) {
    row[j] = self_cell_integral(grid.self_radii[j], k);
  } else {
    row[j] = ball_self_potential(grid.node_radius[j], k, grid.radius) - cplx{sum_re, sum_im};
  }
}

}  // namespace

void kernel_rows(const BallGrid& grid, double k, SelfCellRule rule, std::size_t row_begin,
                 std::size_t row_end, std::span<cplx> out, Execution exec) {
  const std::size_t n = grid.size();
  if (row_end < row_begin || row_end > n || out.size() != (row_end - row_begin) * n) {
    throw std::invalid_argument("kernel_rows: output span does not match the row range");
  }
  const auto count = static_cast<std::ptrdiff_t>(row_end - row_begin);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < count; ++r) {
      one_row(grid, k, rule, row_begin + r, out.data() + r * n);
    }
  } else {
    for (std::ptrdiff_t r = 0; r < count; ++r) {
      one_row(grid, k, rule, row_begin + r, out.data() + r * n);
    }
  }
}

namespace {

void ring_blocks(const BallGrid& grid, double k, SelfCellRule rule, int a, cplx* out) {
  const int rings = grid.ring_count();
  const int nphi = grid.n_phi;
  double sum_re = 0.0, sum_im = 0.0;
  for (int b = 0; b < rings; ++b) {
    const std::size_t col = static_cast<std::size_t>(b) * nphi;  // node (b, 0)
    const Vec3 y = grid.nodes[col];
    const double v = grid.weights[col];
    cplx* block = out + static_cast<std::size_t>(b) * nphi;
    for (int d = 0; d < nphi; ++d) {
      if (a == b && d == 0) continue;
      const double dist = norm(grid.nodes[static_cast<std::size_t>(a) * nphi + d] - y);
      const double scale = v / (4.0 * pi * dist);
      const double c = std::cos(k * dist) * scale;
      const double s = std::sin(k * dist) * scale;
      block[d] = {c, s};
      sum_re += c;
      sum_im += s;
    }
  }
  const std::size_t self = static_cast<std::size_t>(a) * nphi;
  cplx& diag = out[static_cast<std::size_t>(a) * nphi];
  if (rule == SelfCellRule::EquivalentBall) {
    diag = self_cell_integral(grid.self_radii[self], k);
  } else {
    diag = ball_self_potential(grid.node_radius[self], k, grid.radius) - cplx{sum_re, sum_im};
  }
}

}  // namespace

std::vector<cplx> azimuthal_blocks(const BallGrid& grid, double k, SelfCellRule rule,
                                   Execution exec) {
  const int rings = grid.ring_count();
  const std::size_t stride = static_cast<std::size_t>(rings) * grid.n_phi;
  std::vector<cplx> blocks(static_cast<std::size_t>(rings) * stride);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int a = 0; a < rings; ++a) ring_blocks(grid, k, rule, a, blocks.data() + a * stride);
  } else {
    for (int a = 0; a < rings; ++a) ring_blocks(grid, k, rule, a, blocks.data() + a * stride);
  }
  return blocks;
}

namespace {

void apply_ring(const BallGrid& grid, std::span<const cplx> blocks, std::span<const cplx> x,
                int a, cplx* y) {
  const int rings = grid.ring_count();
  const int nphi = grid.n_phi;
  std::vector<double> re(nphi, 0.0), im(nphi, 0.0);
  for (int b = 0; b < rings; ++b) {
    const cplx* c = blocks.data() + (static_cast<std::size_t>(a) * rings + b) * nphi;
    const cplx* xb = x.data() + static_cast<std::size_t>(b) * nphi;
    for (int p = 0; p < nphi; ++p) {
      double sr = 0.0, si = 0.0;
      for (int s = 0; s <= p; ++s) cmac(sr, si, c[p - s], xb[s]);
      for (int s = p + 1; s < nphi; ++s) cmac(sr, si, c[p - s + nphi], xb[s]);
      re[p] += sr;
      im[p] += si;
    }
  }
  for (int p = 0; p < nphi; ++p) y[p] = {re[p], im[p]};
}

}  // namespace

void azimuthal_apply(const BallGrid& grid, std::span<const cplx> blocks, std::span<const cplx> x,
                     std::span<cplx> y, Execution exec) {
  const int rings = grid.ring_count();
  const int nphi = grid.n_phi;
  if (x.size() != grid.size() || y.size() != grid.size() ||
      blocks.size() != static_cast<std::size_t>(rings) * rings * nphi) {
    throw std::invalid_argument("azimuthal_apply: size mismatch");
  }
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (int a = 0; a < rings; ++a) apply_ring(grid, blocks, x, a, y.data() + a * nphi);
  } else {
    for (int a = 0; a < rings; ++a) apply_ring(grid, blocks, x, a, y.data() + a * nphi);
  }
}

namespace {

cplx one_direction(const BallGrid& grid, std::span<const cplx> density, double k, const Vec3& dir) {
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double phase = -k * dot(dir, grid.nodes[j]);
    const cplx e{std::cos(phase) * grid.weights[j], std::sin(phase) * grid.weights[j]};
    cmac(re, im, e, density[j]);
  }
  return cplx{re, im} * (-1.0 / (4.0 * pi));
}

}  // namespace

void far_field(const BallGrid& grid, std::span<const cplx> density, double k,
               std::span<const Vec3> directions, std::span<cplx> out, Execution exec) {
  if (density.size() != grid.size() || out.size() != directions.size()) {
    throw std::invalid_argument("far_field: size mismatch");
  }
  const auto m = static_cast<std::ptrdiff_t>(directions.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < m; ++i) out[i] = one_direction(grid, density, k, directions[i]);
  } else {
    for (std::ptrdiff_t i = 0; i < m; ++i) out[i] = one_direction(grid, density, k, directions[i]);
  }
}

}  // namespace kernels
}  // namespace scatsyn
