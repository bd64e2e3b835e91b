#include <doctest.h>

#include "oracles.hpp"
#include "scatsyn/kernels.hpp"

using namespace scatsyn;

namespace {

cplx simpson_complex(const std::function<cplx(double)>& f, double a, double b, double tol) {
  const double re = oracle::simpson([&](double t) { return f(t).real(); }, a, b, tol);
  const double im = oracle::simpson([&](double t) { return f(t).imag(); }, a, b, tol);
  return {re, im};
}

// Phi(r) through the spherical mean of g over |y| = s, integrated in s.
cplx ball_potential_oracle(double r, double k, double b) {
  const auto shell = [&](double s) -> cplx {
    if (s == 0.0) return 0.0;
    return s * (std::polar(1.0, k * (r + s)) - std::polar(1.0, k * std::abs(r - s))) / (2.0 * I * k * r);
  };
  return simpson_complex(shell, 0.0, r, 1e-14) + simpson_complex(shell, r, b, 1e-14);
}

std::vector<cplx> ramp(std::size_t n) {
  std::vector<cplx> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = cplx(std::sin(0.37 * j), std::cos(0.11 * j));
  return x;
}

}  // namespace

TEST_CASE("self-cell integral matches quadrature and its static limit") {
  for (double k : {0.1, 1.0, 4.0}) {
    for (double rho : {0.01, 0.1, 0.3, 0.9}) {
      const cplx ref = simpson_complex([k](double r) { return r * std::polar(1.0, k * r); }, 0.0, rho, 1e-16);
      CHECK(std::abs(self_cell_integral(rho, k) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
  for (double rho : {0.05, 0.2}) {
    CHECK(std::abs(self_cell_integral(rho, 1e-12) - rho * rho / 2.0) <= 1e-14);
  }
}

TEST_CASE("ball self potential matches the shell-average oracle") {
  for (double k : {0.2, 1.0, 3.0}) {
    for (double r : {0.05, 0.4, 0.8, 0.99}) {
      const cplx ref = ball_potential_oracle(r, k, 1.0);
      CHECK(std::abs(ball_self_potential(r, k, 1.0) - ref) <= 1e-10);
    }
  }
  // static limit (3 b^2 - r^2) / 6
  CHECK(std::abs(ball_self_potential(0.5, 1e-12, 1.0) - (3.0 - 0.25) / 6.0) <= 1e-12);
  CHECK(std::abs(ball_self_potential(0.0, 1e-12, 1.0) - 0.5) <= 1e-12);
}

TEST_CASE("kernel rows: off-diagonal entries are g(x_j, x_i) v_i") {
  const auto g = build_ball_grid(4, 4);
  const std::size_t n = g->size();
  std::vector<cplx> rows(n * n);
  kernels::kernel_rows(*g, 1.3, SelfCellRule::EquivalentBall, 0, n, rows, Execution::Serial);
  oracle::Gen gen(2);
  for (int t = 0; t < 200; ++t) {
    const std::size_t j = gen.integer(0, n - 1), i = gen.integer(0, n - 1);
    if (i == j) {
      CHECK(std::abs(rows[j * n + j] - self_cell_integral(g->self_radii[j], 1.3)) <= 1e-15);
      continue;
    }
    const double d = norm(g->nodes[j] - g->nodes[i]);
    const cplx ref = std::polar(1.0, 1.3 * d) / (4 * pi * d) * g->weights[i];
    CHECK(std::abs(rows[j * n + i] - ref) <= 1e-14 * std::abs(ref));
  }
}

TEST_CASE("kernel rows: subtraction diagonal reproduces the ball potential row sum") {
  const auto g = build_ball_grid(5, 4);
  const std::size_t n = g->size();
  std::vector<cplx> rows(n * n);
  kernels::kernel_rows(*g, 0.8, SelfCellRule::Subtraction, 0, n, rows, Execution::Serial);
  for (std::size_t j = 0; j < n; j += 7) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += rows[j * n + i];
    CHECK(std::abs(s - ball_self_potential(norm(g->nodes[j]), 0.8, 1.0)) <= 1e-13);
  }
}

TEST_CASE("serial and parallel kernels produce identical bits") {
  const auto g = build_ball_grid(6, 6);
  const std::size_t n = g->size();
  for (auto rule : {SelfCellRule::Subtraction, SelfCellRule::EquivalentBall}) {
    std::vector<cplx> a(n * n), b(n * n);
    kernels::kernel_rows(*g, 2.0, rule, 0, n, a, Execution::Serial);
    kernels::kernel_rows(*g, 2.0, rule, 0, n, b, Execution::Parallel);
    CHECK(a == b);

    const auto ba = kernels::azimuthal_blocks(*g, 2.0, rule, Execution::Serial);
    const auto bb = kernels::azimuthal_blocks(*g, 2.0, rule, Execution::Parallel);
    CHECK(ba == bb);

    const auto x = ramp(n);
    std::vector<cplx> ya(n), yb(n);
    kernels::azimuthal_apply(*g, ba, x, ya, Execution::Serial);
    kernels::azimuthal_apply(*g, ba, x, yb, Execution::Parallel);
    CHECK(ya == yb);
  }
  const auto dirs = build_sphere_grid(6);
  const auto rho = ramp(n);
  std::vector<cplx> fa(dirs->size()), fb(dirs->size());
  kernels::far_field(*g, rho, 1.5, dirs->nodes, fa, Execution::Serial);
  kernels::far_field(*g, rho, 1.5, dirs->nodes, fb, Execution::Parallel);
  CHECK(fa == fb);
}

TEST_CASE("partial row ranges match the full assembly") {
  const auto g = build_ball_grid(3, 4);
  const std::size_t n = g->size();
  std::vector<cplx> full(n * n), part(10 * n);
  kernels::kernel_rows(*g, 1.0, SelfCellRule::Subtraction, 0, n, full, Execution::Serial);
  kernels::kernel_rows(*g, 1.0, SelfCellRule::Subtraction, 20, 30, part, Execution::Parallel);
  for (std::size_t r = 0; r < 10; ++r) {
    for (std::size_t i = 0; i < n; ++i) CHECK(part[r * n + i] == full[(20 + r) * n + i]);
  }
}

TEST_CASE("compressed apply agrees with the dense kernel") {
  const auto g = build_ball_grid(5, 6);
  const std::size_t n = g->size();
  for (auto rule : {SelfCellRule::Subtraction, SelfCellRule::EquivalentBall}) {
    std::vector<cplx> dense(n * n);
    kernels::kernel_rows(*g, 1.7, rule, 0, n, dense, Execution::Serial);
    const auto blocks = kernels::azimuthal_blocks(*g, 1.7, rule, Execution::Serial);
    const auto x = ramp(n);
    std::vector<cplx> y(n);
    kernels::azimuthal_apply(*g, blocks, x, y, Execution::Serial);
    for (std::size_t j = 0; j < n; ++j) {
      cplx ref = 0.0;
      for (std::size_t i = 0; i < n; ++i) ref += dense[j * n + i] * x[i];
      CHECK(std::abs(y[j] - ref) <= 1e-12 * (1.0 + std::abs(ref)));
    }
  }
}

TEST_CASE("far field of a point-like density") {
  const auto g = build_ball_grid(3, 4);
  const auto dirs = build_sphere_grid(4);
  std::vector<cplx> rho(g->size(), 0.0);
  rho[17] = 1.0 / g->weights[17];
  std::vector<cplx> out(dirs->size());
  kernels::far_field(*g, rho, 2.0, dirs->nodes, out, Execution::Parallel);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const cplx ref = -std::polar(1.0, -2.0 * dot(dirs->nodes[i], g->nodes[17])) / (4 * pi);
    CHECK(std::abs(out[i] - ref) <= 1e-15);
  }
}
