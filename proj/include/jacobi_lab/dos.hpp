#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jacobi_lab/models.hpp"

namespace jlab {

enum class DosMethod { counting, kernel, kotani };

std::string to_string(DosMethod method);

struct DOSEstimate {
  std::vector<double> grid;
  std::vector<double> nu_cdf;  // fraction of zeros of p_n strictly below each grid energy
  std::vector<double> rho;     // local density
  DosMethod method = DosMethod::counting;
  std::size_t n = 0;
  std::size_t samples = 1;
  double h = 0.0;              // differencing half-width
};

/// Counting estimate from the zeros of p_n(., S^k omega).
///
/// nu_cdf is the raw Sturm count / n. rho differences the piecewise-linear
/// interpolant of the staircase through (x_k, k + 1/2) over [E - h, E + h],
/// h = 20 / n, so it is not limited by the integer count inside the bin.
DOSEstimate dos_counting(const ErgodicModel& model, std::int64_t omega_shift, std::size_t n,
                         std::span<const double> grid);

/// Kernel route: rho(x) = w(x) K_n(x, x) / (n + 1) with w from the boundary
/// m-function at epsilon. nu_cdf is filled from the Sturm count as above.
DOSEstimate dos_kernel(const ErgodicModel& model, std::int64_t omega_shift, std::size_t n,
                       std::span<const double> grid, double epsilon);

struct Gap {
  double lo = 0.0;
  double hi = 0.0;
  double nu = 0.0;  // gap label: value of nu_cdf on the plateau
};

/// Plateaus of nu_cdf (flat to < 1/(2n)) longer than 5h with 0 < nu < 1.
std::vector<Gap> detect_gaps(const DOSEstimate& estimate);

struct KotaniEstimate {
  double rho = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// (1 / 2 pi) E_omega[1 / (a_0^2 Im m(x + i epsilon, omega))], Monte Carlo over
/// independent draws of omega. A phase-independent model is evaluated once
/// (std_error = 0).
KotaniEstimate dos_kotani(const ErgodicModel& model, double x, double epsilon,
                          std::size_t phase_samples, std::uint64_t seed);

/// Equilibrium density of [lo, hi]: 1 / (pi sqrt((x - lo)(hi - x))).
/// Throws std::domain_error unless lo < x < hi.
double equilibrium_density(double lo, double hi, double x);

/// Trapezoid integral of rho over the grid.
double integrated_density(const DOSEstimate& estimate);

}  // namespace jlab
