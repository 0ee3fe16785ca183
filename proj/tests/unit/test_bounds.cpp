#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "jacobi_lab/bounds.hpp"
#include "jacobi_lab/errors.hpp"
#include "jacobi_lab/models.hpp"
#include "jacobi_lab/transfer.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace jlab;
using doctest::Approx;
using cplx = std::complex<double>;

namespace {

const double golden = (std::sqrt(5.0) - 1.0) / 2.0;

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

// (1/(n+1)) sum_j ||T_j(z)||^2 by explicit products
double brute_cesaro(const JacobiParams& p, cplx z, int n) {
  const auto a = to_vec(p.a_values());
  const auto b = to_vec(p.b_values());
  double s = 0.0;
  for (int j = 0; j <= n; ++j) s += std::pow(oracle::frob(oracle::brute_transfer(a, b, z, j)), 2);
  return s / (n + 1);
}

}  // namespace

TEST_CASE("cesaro bound: free closed form") {
  const auto p = JacobiParams::free(1000);
  const auto r = check_cesaro_bound(p, 0.0, cplx(0.0, 2.0), 1000);
  CHECK(r.constant_C == Approx(2.0).epsilon(1e-12));
  CHECK(r.rhs == Approx(2.0 * std::exp(8.0)).epsilon(1e-10));
  CHECK(r.holds);
  CHECK(r.margin > 0.0);
  CHECK(r.margin == r.rhs - r.lhs);
  const auto p60 = JacobiParams::free(60);
  const auto r60 = check_cesaro_bound(p60, 0.0, cplx(0.0, 2.0), 60);
  CHECK(r60.lhs == Approx(brute_cesaro(p60, cplx(0.0, 2.0 / 61.0), 60)).epsilon(1e-12));

  const auto z0 = check_cesaro_bound(p, 0.3, 0.0, 500);
  CHECK(z0.holds);
  CHECK(z0.lhs <= z0.constant_C * (1.0 + 1e-12));
}

TEST_CASE("cesaro bound: almost Mathieu at a DOS-positive energy") {
  const auto model = ErgodicModel::almost_mathieu(0.5, golden, 0.0);
  oracle::Gen g(71);
  const double x0 = gen::dos_positive_energy(model, 0.5, g);
  const auto r = check_cesaro_bound(realize(model, 0, 2000), x0, cplx(1.0, 1.0), 2000);
  CHECK(r.holds);
  CHECK(r.constant_C >= 2.0);
}

TEST_CASE("sup bound: free rotation orbit, z = 0, negative control") {
  const auto p = JacobiParams::free(2000);
  oracle::Gen g(72);
  for (int i = 0; i < 50; ++i) {
    const auto n = static_cast<std::size_t>(g.integer(0, 2000));
    const cplx z = std::polar(g.uniform(0.0, 5.0), g.uniform(0.0, 2.0 * oracle::pi));
    const auto r = check_sup_bound(p, 0.0, z, n);
    CHECK(r.constant_C == Approx(2.0).epsilon(1e-12));
    CHECK(r.holds);
  }
  const auto r0 = check_sup_bound(p, 0.0, 0.0, 1234);
  CHECK(r0.lhs <= std::sqrt(r0.constant_C) * (1.0 + 1e-12));
  CHECK(r0.holds);

  const cplx big(0.0, 10.0);
  CHECK(check_sup_bound(p, 0.0, big, 2000).holds);
  CHECK_FALSE(check_sup_bound(p, 0.0, big, 2000, BoundOptions{1e-3}).holds);
  CHECK_FALSE(check_cesaro_bound(p, 0.0, big, 2000, BoundOptions{1e-3}).holds);
}

TEST_CASE("property: both bounds hold across models") {
  oracle::Gen g(73);
  const std::vector<ErgodicModel> models = {
      ErgodicModel::free(), ErgodicModel::periodic({0.7, 1.3, 1.0}, {0.4, -0.6, 0.0}),
      ErgodicModel::almost_mathieu(0.5, golden, 0.0), ErgodicModel::anderson(1.0, 3)};
  for (int trial = 0; trial < 400; ++trial) {
    const auto& m = models[trial % models.size()];
    const auto n = static_cast<std::size_t>(g.integer(0, 2000));
    const auto p = realize(m, g.integer(-500, 500), std::max<std::size_t>(n, 1));
    const double x0 = g.uniform(-3.5, 3.5);
    const cplx z = std::polar(g.uniform(0.0, 10.0), g.uniform(0.0, 2.0 * oracle::pi));
    const auto c = check_cesaro_bound(p, x0, z, n);
    const auto s = check_sup_bound(p, x0, z, n);
    CHECK(c.holds);
    CHECK(s.holds);
    CHECK(c.log_lhs <= c.log_rhs + 1e-10);
    CHECK(s.log_lhs <= s.log_rhs + 1e-10);
  }
}

TEST_CASE("l1 perturbation: zero, single site, decaying") {
  const auto p = JacobiParams::free(10000);
  const std::vector<double> zero(10000, 0.0);
  const auto r0 = check_l1_perturbation(p, zero, zero, 0.0, 500);
  CHECK(r0.holds);
  CHECK(r0.margin >= 0.0);
  CHECK(r0.lhs <= r0.rhs);

  std::vector<double> db(10000, 0.0);
  db[0] = 0.1;
  const auto r1 = check_l1_perturbation(p, zero, db, 0.0, 800);
  CHECK(r1.holds);
  // direct product oracle
  std::vector<double> bb(800, 0.0);
  bb[0] = 0.1;
  const double direct = oracle::frob(oracle::brute_transfer(std::vector<double>(800, 1.0), bb, 0.0, 800));
  CHECK(r1.lhs == Approx(direct).epsilon(1e-10));

  std::vector<double> decay(10000);
  for (std::size_t j = 0; j < decay.size(); ++j) decay[j] = 1.0 / std::pow(static_cast<double>(j + 1), 2);
  double sup = 0.0;
  for (std::size_t n : {1000u, 2000u, 4000u, 7000u, 10000u}) {
    const auto r = check_l1_perturbation(p, zero, decay, 0.0, n);
    CHECK(r.holds);
    sup = std::max(sup, r.lhs);
  }
  MESSAGE("sup ||T'_n(0)|| for b_j = j^-2: " << sup);
  CHECK(sup < 20.0);

  std::vector<double> da(10, 0.0);
  da[3] = -1.5;
  CHECK_THROWS_AS(check_l1_perturbation(JacobiParams::free(10), da, zero, 0.0, 10), InvalidPerturbation);
}

TEST_CASE("property: C3 bounds the one-step difference") {
  oracle::Gen g(74);
  for (int trial = 0; trial < 2000; ++trial) {
    const double a = g.uniform(0.2, 2.0);
    const double b = g.uniform(-2.0, 2.0);
    const double da = g.uniform(-0.19, 1.0);
    const double db = g.uniform(-1.0, 1.0);
    const double x0 = g.uniform(-4.0, 4.0);
    const JacobiParams p({a}, {b});
    const JacobiParams q({a + da}, {b + db});
    const double diff = (step_matrix(q, 1, x0) - step_matrix(p, 1, x0)).frobenius();
    const double alpha = a;
    const double alpha_p = a + da;
    const double C3 = perturbation_constant(x0, std::abs(b), alpha, alpha_p);
    CHECK(C3 >= 2.0);
    CHECK(diff <= C3 * (1.0 / alpha + 1.0 / alpha_p) * (std::abs(da) + std::abs(db)) * (1.0 + 1e-12));
  }
}

TEST_CASE("property: l1 perturbation bound holds on random draws") {
  oracle::Gen g(75);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(1, 400);
    const JacobiParams p(g.vec(n, 0.5, 1.5), g.vec(n, -1.0, 1.0));
    const double size = std::pow(10.0, g.uniform(-4.0, -1.0));
    const auto da = g.vec(n, -size, size);
    const auto db = g.vec(n, -size, size);
    CHECK(check_l1_perturbation(p, da, db, g.uniform(-2.5, 2.5), n).holds);
  }
}

TEST_CASE("telescoping identity") {
  const auto model = ErgodicModel::almost_mathieu(0.5, golden, 0.2);
  const auto p = realize(model, 0, 2000);
  oracle::Gen e(77);
  for (int i = 0; i < 2; ++i) {
    const double x0 = gen::dos_positive_energy(model, 0.5, e);
    for (cplx z : {cplx(1.0, 1.0), cplx(0.0, 5.0), cplx(-3.0, 0.0)}) {
      CHECK(telescoping_defect(p, x0, z, 2000) < 1e-8);
    }
  }
  CHECK(std::isinf(telescoping_defect(p, 3.5, cplx(0.0, 0.0), 2000)));
  // Band instances: with exponentially growing T_n the identity is exact but its
  // floating-point evaluation loses about ||T_n||^4 in relative accuracy.
  oracle::Gen g(76);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(1, 500);
    const auto inst = gen::band_instance(g, n);
    const double size = std::pow(10.0, g.uniform(-4.0, -1.0));
    auto a = to_vec(inst.params.a_values());
    auto b = to_vec(inst.params.b_values());
    for (auto& v : a) v += g.uniform(-size, size);
    for (auto& v : b) v += g.uniform(-size, size);
    const JacobiParams pert(a, b);
    CHECK(telescoping_defect(inst.params, pert, inst.x0, n) < 1e-8);
    CHECK(telescoping_defect(inst.params, inst.x0, std::polar(g.uniform(0.0, 1.0), g.uniform(0.0, 6.3)), n) < 1e-8);
  }
}

TEST_CASE("ray monotonicity diagnostic") {
  const std::vector<double> radii = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
  CHECK(ray_monotonicity_violations(JacobiParams::free(1000), 0.0, oracle::pi / 2, radii, 1000) == 0);
  const auto p = realize(ErgodicModel::almost_mathieu(0.5, golden, 0.0), 0, 1000);
  const auto v = ray_monotonicity_violations(p, 0.3, 1.0, radii, 1000);
  MESSAGE("almost Mathieu ray violations: " << v);
  CHECK(v < radii.size());
}
