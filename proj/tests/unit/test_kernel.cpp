#include <doctest.h>

#include <cmath>

#include "jacobi_lab/errors.hpp"
#include "jacobi_lab/kernel.hpp"
#include "jacobi_lab/polynomials.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace jlab;
using doctest::Approx;

namespace {

JacobiParams random_params(oracle::Gen& g, int n) { return JacobiParams(g.vec(n, 0.5, 1.5), g.vec(n, -1.0, 1.0)); }

}  // namespace

TEST_CASE("kernel: small free examples") {
  const auto p = JacobiParams::free(10);
  for (double x : {-1.0, 0.2, 1.5}) {
    for (double y : {-0.7, 0.0, 0.9}) CHECK(kernel(p, x, y, 1) == Approx(1.0 + x * y).epsilon(1e-14));
  }
  CHECK(kernel(p, 0.0, 0.0, 2) == 2.0);
  CHECK(kernel(p, 0.3, -0.4, 0) == 1.0);
}

TEST_CASE("kernel: Christoffel average at 0 tends to 1/2 within 1/n") {
  for (std::size_t n : {100u, 1000u, 10000u}) {
    const auto p = JacobiParams::free(n + 1);
    const double avg = kernel(p, 0.0, 0.0, n) / static_cast<double>(n + 1);
    CHECK(std::abs(avg - 0.5) < 1.0 / static_cast<double>(n));
    CHECK(kernel(p, 0.0, 0.0, n) == Approx(oracle::free_kernel_diag(static_cast<int>(n), 0.0)).epsilon(1e-12));
  }
}

TEST_CASE("kernel: closed-form free kernel off the diagonal") {
  const auto p = JacobiParams::free(801);
  for (double x : {-1.3, 0.0, 0.45}) {
    for (double y : {-0.2, 0.011, 1.7}) {
      CHECK(kernel(p, x, y, 800) == Approx(oracle::free_kernel(800, x, y)).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("kernel property: CD formula, Schwarz inequality, symmetry") {
  oracle::Gen g(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = g.integer(0, 500);
    const auto params = random_params(g, n + 1);
    const double x = g.uniform(-2.5, 2.5);
    const double y = g.uniform(-2.5, 2.5);
    // The built-in check throws CdFormulaMismatch on disagreement.
    const double k = kernel(params, x, y, n);
    const auto cd = kernel_cd_formula(params, x, y, n);
    if (std::abs(x - y) > cd_switchover(x) && cd) {
      const double kxx = kernel(params, x, x, n);
      const double kyy = kernel(params, y, y, n);
      CHECK(std::abs(*cd - k) <= 1e-8 * std::sqrt(kxx * kyy));
      CHECK(k * k <= kxx * kyy * (1.0 + 1e-12));
    }
    CHECK(kernel(params, y, x, n) == k);
  }
}

TEST_CASE("kernel: CD closed form needs a_{n+1}") {
  const auto p = JacobiParams::free(5);
  CHECK_FALSE(kernel_cd_formula(p, 0.1, 0.2, 5).has_value());
  CHECK(kernel_cd_formula(p, 0.1, 0.2, 4).has_value());
  CHECK_FALSE(kernel_cd_formula(p, 0.1, 0.1, 4).has_value());
  CHECK_NOTHROW(kernel(p, 0.1, 0.2, 5));
}

TEST_CASE("scaled grid: center, symmetry, sinc limit") {
  const std::size_t n = 2000;
  const auto p = JacobiParams::free(n + 1);
  const double zero[] = {0.0};
  const auto g0 = scaled_grid(p, 0.37, n, zero, ScalingMode::plain);
  CHECK(g0.at(0, 0) == 1.0);

  const auto offs = symmetric_offsets(10.0, 0.5);
  CHECK(offs.size() == 41);
  const auto grid = scaled_grid(p, 0.0, n, offs, ScalingMode::plain);
  const double rho = 1.0 / (2.0 * oracle::pi);
  double worst = 0.0;
  for (std::size_t i = 0; i < offs.size(); ++i) {
    for (std::size_t k = 0; k < offs.size(); ++k) {
      CHECK(grid.at(i, k) == grid.at(k, i));
      // closed-form oracle for the ratio
      const double ref = oracle::free_kernel(static_cast<int>(n), offs[i] / n, offs[k] / n) /
                         oracle::free_kernel_diag(static_cast<int>(n), 0.0);
      CHECK(grid.at(i, k) == Approx(ref).epsilon(1e-8).scale(1.0));
    }
  }
  CHECK(grid.at(20, 20) == 1.0);
  worst = max_sinc_deviation(grid, rho);
  CHECK(worst < 0.02);
  CHECK(sinc_reference(rho, 0.0) == 1.0);
  CHECK(sinc_reference(0.5, 2.0) == Approx(0.0).scale(1.0));
}

TEST_CASE("scaled grid: weak mode density and degenerate input") {
  const std::size_t n = 2000;
  const auto p = JacobiParams::free(n + 1);
  const double zero[] = {0.0};
  const auto g = scaled_grid(p, 0.0, n, zero, ScalingMode::weak, 1.0 / oracle::pi);
  CHECK(std::abs(g.rho_n - 1.0 / (2.0 * oracle::pi)) < 2.0 / n);
  CHECK_THROWS(scaled_grid(p, 0.0, n, zero, ScalingMode::weak));

  const auto offs = symmetric_offsets(5.0, 0.5);
  const auto gw = scaled_grid(p, 0.0, n, offs, ScalingMode::weak, 1.0 / oracle::pi);
  CHECK(max_sinc_deviation(gw, 0.0) < 0.02);
}

TEST_CASE("wiggle: bulk versus edge") {
  const std::size_t n = 2000;
  const auto p = JacobiParams::free(n + 1);
  CHECK(wiggle_deviation(p, 0.0, n, 0.0) == 0.0);
  CHECK(wiggle_deviation(p, 0.0, n, 5.0) < 0.05);
  CHECK(wiggle_deviation(p, 2.0, n, 5.0) > 0.5);
  CHECK_THROWS(wiggle_deviation(p, 0.0, n, -1.0));
}

TEST_CASE("diagonal derivative: n = 1 by hand") {
  JacobiParams p({0.8, 1.3}, {0.2, -0.1});
  const double x = 0.35;
  // p0 = 1, p1 = (x - b1)/a1, q0 = 0, q1 = -1/a1.
  const double p1 = (x - 0.2) / 0.8;
  const double q1 = -1.0 / 0.8;
  // j = 0: 1 * 0 - 0 = 0; j = 1: p1^2 (p1 q1) - q1 p1 (1 + p1^2)
  const double expect = 2.0 * (p1 * p1 * (p1 * q1) - q1 * p1 * (1.0 + p1 * p1));
  CHECK(diagonal_derivative(p, x, 1) == Approx(expect).epsilon(1e-14));
  // d/da of (1/1) K_1(x + a, x + a) = 2 p1 p1' = 2 p1 / a1
  CHECK(diagonal_derivative(p, x, 1) == Approx(2.0 * p1 / 0.8).epsilon(1e-14));
}

TEST_CASE("diagonal derivative: free center vanishes, finite difference agreement") {
  const auto p = JacobiParams::free(4001);
  CHECK(std::abs(diagonal_derivative(p, 0.0, 4000)) < 1e-12);
  oracle::Gen g(22);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(1, 500);
    const auto inst = gen::band_instance(g, n);
    const auto& params = inst.params;
    const double x0 = inst.x0;
    const double d = diagonal_derivative(params, x0, n);
    const double fd = diagonal_derivative_fd(params, x0, n);
    const double scale = kernel(params, x0, x0, n) / n;
    CHECK(std::abs(d - fd) <= 1e-4 * std::max(std::abs(fd), scale));
  }
}

TEST_CASE("derivative identity: examples and random draws") {
  const auto p = JacobiParams::free(3);
  CHECK(derivative_via_identity(p, 1.0, 3) == Approx(1.0).epsilon(1e-14));
  CHECK(derivative_finite_difference(p, 1.0, 3) == Approx(1.0).epsilon(1e-9));
  JacobiParams q({0.7}, {0.3});
  CHECK(derivative_via_identity(q, -0.4, 1) == Approx(1.0 / 0.7).epsilon(1e-14));

  oracle::Gen g(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(1, 500);
    const auto inst = gen::band_instance(g, n);
    CHECK(derivative_identity_check(inst.params, inst.x0, n) < 1e-6);
  }
  // i.i.d. coefficients: short enough that the growth stays mild.
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = random_params(g, 50);
    CHECK(derivative_identity_check(r, g.uniform(-1.0, 1.0), 50) < 1e-6);
  }
}

TEST_CASE("derivative identity matches the differentiated recurrence") {
  oracle::Gen g(24);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(1, 500);
    const auto inst = gen::band_instance(g, n);
    const std::vector<double> a(inst.params.a_values().begin(), inst.params.a_values().end());
    const std::vector<double> b(inst.params.b_values().begin(), inst.params.b_values().end());
    const double exact = oracle::brute_poly_derivative(a, b, inst.x0, n);
    CHECK(derivative_via_identity(inst.params, inst.x0, n) == Approx(exact).epsilon(1e-9).scale(1.0));
  }
}
