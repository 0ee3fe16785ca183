#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "jacobi_lab/dos.hpp"
#include "jacobi_lab/models.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace jlab;
using doctest::Approx;

namespace {

const double golden = (std::sqrt(5.0) - 1.0) / 2.0;

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
  return v;
}

}  // namespace

TEST_CASE("dos_counting: free arcsine law") {
  const std::vector<double> grid = {-3.0, -1.0, 0.0, 0.5, 1.0, 3.0};
  const auto d = dos_counting(ErgodicModel::free(), 0, 5000, grid);
  CHECK(d.method == DosMethod::counting);
  CHECK(d.h == Approx(20.0 / 5000));
  CHECK(d.nu_cdf[0] == 0.0);
  CHECK(d.nu_cdf[5] == 1.0);
  CHECK(std::abs(d.nu_cdf[2] - 0.5) <= 1.0 / 5000);
  CHECK(std::abs(d.rho[2] - 1.0 / (2.0 * oracle::pi)) < 0.01);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    CHECK(d.rho[i] == Approx(oracle::arcsine_density(grid[i])).epsilon(0.02));
    // closed-form count: zeros 2 cos(k pi / (n + 1)) below E
    const auto z = oracle::chebyshev_zeros(5000);
    const auto below = std::lower_bound(z.begin(), z.end(), grid[i]) - z.begin();
    CHECK(d.nu_cdf[i] == static_cast<double>(below) / 5000.0);
  }
  CHECK(d.rho[0] == 0.0);
  CHECK(d.rho[5] == 0.0);
}

TEST_CASE("property: counting estimate invariants") {
  oracle::Gen g(61);
  const std::vector<ErgodicModel> models = {ErgodicModel::almost_mathieu(0.5, golden, 0.3),
                                            ErgodicModel::anderson(1.0, 4),
                                            ErgodicModel::periodic({1.0, 0.6}, {0.5, -0.5}), ErgodicModel::free()};
  for (int trial = 0; trial < 24; ++trial) {
    const auto& m = models[trial % models.size()];
    const std::size_t n = static_cast<std::size_t>(g.integer(50, 1500));
    const double h = 20.0 / static_cast<double>(n);
    // Uniform grid; every other trial the step divides the window 2h.
    const double step = trial % 2 ? 2.0 * h / g.integer(1, 10) : h * g.uniform(0.1, 3.0);
    std::vector<double> grid;
    for (double E = -4.0 - g.uniform(0.0, step); E <= 4.0; E += step) grid.push_back(E);
    const auto d = dos_counting(m, g.integer(0, 100), n, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(d.nu_cdf[i] >= 0.0);
      CHECK(d.nu_cdf[i] <= 1.0);
      CHECK(d.rho[i] >= 0.0);
      if (i) CHECK(d.nu_cdf[i] >= d.nu_cdf[i - 1]);
    }
    // n - 1 units of mass, each seen by trapezoid weights summing to at most step * ceil(2h / step)
    const double cover = step * std::ceil(2.0 * h / step - 1e-9) / (2.0 * h);
    const double bound = (static_cast<double>(n) - 1.0) / static_cast<double>(n) * cover;
    CHECK(integrated_density(d) <= bound + 1e-6);
    if (trial % 2) CHECK(integrated_density(d) <= 1.0 + 1e-6);
  }
}

TEST_CASE("dos_counting: almost Mathieu gaps") {
  const auto grid = linspace(-3.0, 3.0, 3001);
  const auto d = dos_counting(ErgodicModel::almost_mathieu(0.5, golden, 0.0), 0, 5000, grid);
  const auto gaps = detect_gaps(d);
  CHECK(gaps.size() >= 1);
  for (const auto& gap : gaps) {
    CHECK(gap.hi - gap.lo > 5.0 * d.h);
    CHECK(gap.nu > 0.0);
    CHECK(gap.nu < 1.0);
  }
  // none for the free model
  const auto f = dos_counting(ErgodicModel::free(), 0, 5000, grid);
  CHECK(detect_gaps(f).empty());
}

TEST_CASE("dos_kotani: free closed forms") {
  const auto k0 = dos_kotani(ErgodicModel::free(), 0.0, 1e-4, 100, 1);
  CHECK(k0.rho == Approx(1.0 / (2.0 * oracle::pi)).epsilon(1e-4));
  CHECK(k0.std_error == 0.0);
  const auto k1 = dos_kotani(ErgodicModel::free(), 1.0, 1e-4, 100, 1);
  CHECK(k1.rho == Approx(1.0 / (oracle::pi * std::sqrt(3.0))).epsilon(1e-4));
  for (double x : {-1.0, -0.5, 0.5}) {
    const auto k = dos_kotani(ErgodicModel::free(), x, 1e-4, 10, 2);
    CHECK(k.rho == Approx(equilibrium_density(-2.0, 2.0, x)).epsilon(1e-3));
  }
  CHECK_THROWS(dos_kotani(ErgodicModel::free(), 0.0, 1e-4, 0, 1));
}

TEST_CASE("dos_kotani: almost Mathieu agrees with counting") {
  const auto model = ErgodicModel::almost_mathieu(0.5, golden, 0.0);
  oracle::Gen g(62);
  const double x = gen::dos_positive_energy(model, 0.5, g);
  const auto k = dos_kotani(model, x, 1e-4, 2000, 11);
  CHECK(k.samples == 2000);
  CHECK(k.std_error > 0.0);
  const double grid[] = {x};
  const auto c = dos_counting(model, 0, 5000, grid);
  CHECK(std::abs(k.rho - c.rho[0]) < 3.0 * k.std_error + 0.02 * c.rho[0]);
  // deterministic
  CHECK(dos_kotani(model, x, 1e-4, 50, 11).rho == dos_kotani(model, x, 1e-4, 50, 11).rho);
}

TEST_CASE("dos_kernel: weighted Christoffel route") {
  const std::vector<double> grid = {-1.0, 0.0, 0.7};
  const auto kr = dos_kernel(ErgodicModel::free(), 0, 4000, grid, 1e-4);
  CHECK(kr.method == DosMethod::kernel);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(kr.rho[i] == Approx(oracle::arcsine_density(grid[i])).epsilon(0.01));
  }
  const auto model = ErgodicModel::almost_mathieu(0.5, golden, 0.0);
  oracle::Gen g(63);
  const double x = gen::dos_positive_energy(model, 0.5, g);
  const double pt[] = {x};
  const auto ak = dos_kernel(model, 0, 5000, pt, 1e-4);
  const auto ac = dos_counting(model, 0, 5000, pt);
  CHECK(ak.rho[0] == Approx(ac.rho[0]).epsilon(0.1));
}

TEST_CASE("equilibrium density") {
  CHECK(equilibrium_density(-2.0, 2.0, 0.0) == Approx(1.0 / (2.0 * oracle::pi)));
  CHECK(equilibrium_density(-1.0, 1.0, 0.0) == Approx(1.0 / oracle::pi));
  CHECK_THROWS_AS(equilibrium_density(-2.0, 2.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(equilibrium_density(-2.0, 2.0, -3.0), std::domain_error);
  CHECK(equilibrium_density(-2.0, 2.0, 1.999999) > 100.0);
  CHECK(to_string(DosMethod::kotani) == "kotani");
}
