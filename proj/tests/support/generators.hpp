#pragma once

// Seeded instance generators shared by the unit and acceptance tests.

#include <cmath>
#include <complex>
#include <vector>

#include "jacobi_lab/boundary.hpp"
#include "jacobi_lab/jacobi_params.hpp"
#include "jacobi_lab/models.hpp"
#include "oracles.hpp"

namespace gen {

struct BandInstance {
  jlab::JacobiParams params;
  double x0;
  int period;
};

// Random periodic coefficients with x0 drawn inside a band, away from the
// edges (|discriminant| < 1.8), so that the polynomials stay bounded.
inline BandInstance band_instance(oracle::Gen& g, int n) {
  for (;;) {
    const int period = g.integer(1, 4);
    const auto a = g.vec(period, 0.6, 1.4);
    const auto b = g.vec(period, -0.8, 0.8);
    for (int attempt = 0; attempt < 50; ++attempt) {
      const double x0 = g.uniform(-3.0, 3.0);
      const auto T = oracle::brute_transfer(a, b, x0, period);
      const double disc = std::real(T[0] + T[3]);
      if (std::abs(disc) < 1.8) {
        std::vector<double> av(n + 1), bv(n + 1);
        for (int j = 0; j <= n; ++j) {
          av[j] = a[j % period];
          bv[j] = b[j % period];
        }
        return {jlab::JacobiParams(std::move(av), std::move(bv)), x0, period};
      }
    }
  }
}

// Energy in the almost Mathieu hull where the boundary value is well
// resolved: extrapolation accepted with a small error estimate and
// Im m(x + i0) >= min_im.
inline double dos_positive_energy(const jlab::ErgodicModel& model, double lambda, oracle::Gen& g,
                                  double min_im = 0.1, double resolution = 1e-9) {
  const double edge = 2.0 + 2.0 * std::abs(lambda);
  for (;;) {
    const double x = g.uniform(-0.9 * edge, 0.9 * edge);
    const auto orbit = jlab::boundary_orbit(model, 0, x, 0);
    if (orbit.extrapolated && orbit.error_estimate < resolution && orbit.m[0].imag() >= min_im) return x;
  }
}

}  // namespace gen
