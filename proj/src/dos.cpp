#include "jacobi_lab/dos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "jacobi_lab/boundary.hpp"
#include "jacobi_lab/kernel.hpp"
#include "jacobi_lab/zeros.hpp"

namespace jlab {

namespace {

void require_sorted(std::span<const double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("dos: grid must be sorted");
}

// Piecewise-linear staircase through (x_k, k + 1/2), constant 1/2 below x_0
// and n - 1/2 above x_{n-1}.
double staircase(const std::vector<double>& zeros, std::size_t offset, std::size_t n, double E) {
  const auto it = std::lower_bound(zeros.begin(), zeros.end(), E);
  const std::size_t c = offset + static_cast<std::size_t>(it - zeros.begin());
  if (c == 0) return 0.5;
  if (c == n) return static_cast<double>(n) - 0.5;
  const double below = *(it - 1);
  const double above = *it;
  if (!(above > below)) return static_cast<double>(c);
  const double t = std::clamp((E - below) / (above - below), 0.0, 1.0);
  return static_cast<double>(c) - 0.5 + t;
}

double smooth_count(const JacobiParams& params, std::size_t n, double E) {
  const std::size_t c = eig_count(params, n, E);
  if (c == 0) return 0.5;
  if (c == n) return static_cast<double>(n) - 0.5;
  const double tol = 1e-13 * (1.0 + std::abs(E));
  const double below = eigenvalue(params, n, c - 1, tol);
  const double above = eigenvalue(params, n, c, tol);
  if (!(above > below)) return static_cast<double>(c);
  const double t = std::clamp((E - below) / (above - below), 0.0, 1.0);
  return static_cast<double>(c) - 0.5 + t;
}

DOSEstimate counting_skeleton(const JacobiParams& params, std::size_t n, std::span<const double> grid) {
  DOSEstimate out;
  out.grid.assign(grid.begin(), grid.end());
  out.n = n;
  out.h = 20.0 / static_cast<double>(n);
  out.nu_cdf.reserve(grid.size());
  for (double E : grid) out.nu_cdf.push_back(static_cast<double>(eig_count(params, n, E)) / static_cast<double>(n));
  return out;
}

}  // namespace

std::string to_string(DosMethod method) {
  switch (method) {
    case DosMethod::counting: return "counting";
    case DosMethod::kernel: return "kernel";
    case DosMethod::kotani: return "kotani";
  }
  return "unknown";
}

DOSEstimate dos_counting(const ErgodicModel& model, std::int64_t omega_shift, std::size_t n,
                         std::span<const double> grid) {
  if (n < 1) throw std::invalid_argument("dos_counting: n must be >= 1");
  require_sorted(grid);
  const auto params = realize(model, omega_shift, n);
  auto out = counting_skeleton(params, n, grid);
  out.method = DosMethod::counting;
  out.rho.reserve(grid.size());
  const double nd = static_cast<double>(n);
  if (grid.empty()) return out;
  // Dense grids: find every zero once (plus one on each side of the range).
  // Sparse grids: four isolated eigenvalues per point.
  const double lo = grid.front() - out.h;
  const double hi = grid.back() + out.h;
  const std::size_t inside = eig_count(params, n, std::nextafter(hi, hi + 1.0)) - eig_count(params, n, lo);
  if (inside < 10 * grid.size()) {
    const std::size_t first = eig_count(params, n, lo);
    const std::size_t below = first > 0 ? first - 1 : 0;
    const std::size_t above = std::min(n, first + inside + 1);
    std::vector<double> zeros;
    if (above > below) {
      const double tol = 1e-13 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
      const double left = below < first ? eigenvalue(params, n, below, tol) : lo;
      const double right = above > first + inside ? eigenvalue(params, n, above - 1, tol) : hi;
      zeros = zeros_in_window(params, n, 0.5 * (left + right), 0.5 * (right - left) + tol).zeros;
    }
    const std::size_t offset = below;
    for (double E : grid) {
      const double up = staircase(zeros, offset, n, E + out.h);
      const double down = staircase(zeros, offset, n, E - out.h);
      out.rho.push_back(std::max(0.0, up - down) / (2.0 * out.h * nd));
    }
    return out;
  }
  for (double E : grid) {
    const double up = smooth_count(params, n, E + out.h);
    const double down = smooth_count(params, n, E - out.h);
    out.rho.push_back(std::max(0.0, up - down) / (2.0 * out.h * nd));
  }
  return out;
}

DOSEstimate dos_kernel(const ErgodicModel& model, std::int64_t omega_shift, std::size_t n,
                       std::span<const double> grid, double epsilon) {
  if (n < 1) throw std::invalid_argument("dos_kernel: n must be >= 1");
  require_sorted(grid);
  const auto params = realize(model, omega_shift, n + 1);
  auto out = counting_skeleton(params, n, grid);
  out.method = DosMethod::kernel;
  out.rho.reserve(grid.size());
  BoundaryOptions options;
  options.epsilon = epsilon;
  for (double E : grid) {
    const auto orbit = boundary_orbit(model, omega_shift, E, 0, options);
    const double w = orbit.m[0].imag() / std::numbers::pi;
    out.rho.push_back(w * kernel(params, E, E, n, false) / static_cast<double>(n + 1));
  }
  return out;
}

std::vector<Gap> detect_gaps(const DOSEstimate& est) {
  std::vector<Gap> gaps;
  if (est.grid.size() < 2 || est.n == 0) return gaps;
  const double flat = 0.5 / static_cast<double>(est.n);
  const double min_span = 5.0 * est.h;
  std::size_t start = 0;
  const auto close_run = [&](std::size_t end) {
    const double nu = est.nu_cdf[start];
    if (est.grid[end] - est.grid[start] > min_span && nu > 0.0 && nu < 1.0) {
      gaps.push_back({est.grid[start], est.grid[end], nu});
    }
  };
  for (std::size_t i = 1; i < est.grid.size(); ++i) {
    if (std::abs(est.nu_cdf[i] - est.nu_cdf[start]) >= flat) {
      close_run(i - 1);
      start = i;
    }
  }
  close_run(est.grid.size() - 1);
  return gaps;
}

KotaniEstimate dos_kotani(const ErgodicModel& model, double x, double epsilon, std::size_t phase_samples,
                          std::uint64_t seed) {
  if (phase_samples < 1) throw std::invalid_argument("dos_kotani: phase_samples must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("dos_kotani: epsilon must be positive");
  BoundaryOptions raw;
  raw.epsilon = epsilon;
  raw.levels = 1;
  const auto one = [&](const ErgodicModel& m) {
    const auto orbit = boundary_orbit(m, 0, x, 0, raw);
    const double a0 = m.at(0).a;
    return 1.0 / (a0 * a0 * make_boundary(x, epsilon, orbit.m[0]).m.imag()) / (2.0 * std::numbers::pi);
  };

  KotaniEstimate out;
  if (model.phase_independent()) {
    out.rho = one(model);
    out.samples = 1;
    return out;
  }
  const auto draws = sample_realizations(model, phase_samples, seed);
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (const auto& m : draws) {
    const double v = one(m);
    ++k;
    const double d = v - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (v - mean);
  }
  out.rho = mean;
  out.samples = k;
  out.std_error = k > 1 ? std::sqrt(m2 / static_cast<double>(k - 1) / static_cast<double>(k)) : 0.0;
  return out;
}

double equilibrium_density(double lo, double hi, double x) {
  if (!(lo < x && x < hi)) throw std::domain_error("equilibrium_density: x must lie strictly inside (lo, hi)");
  return 1.0 / (std::numbers::pi * std::sqrt((x - lo) * (hi - x)));
}

double integrated_density(const DOSEstimate& est) {
  double total = 0.0;
  for (std::size_t i = 1; i < est.grid.size(); ++i) {
    total += 0.5 * (est.rho[i] + est.rho[i - 1]) * (est.grid[i] - est.grid[i - 1]);
  }
  return total;
}

}  // namespace jlab
