#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jacobi_lab/jacobi_params.hpp"

namespace jlab {

/// Below this separation the CD closed form is not evaluated (it divides by x - y).
inline double cd_switchover(double x) { return 1e-6 * (1.0 + (x < 0 ? -x : x)); }

/// K_n(x, y) = sum_{j=0}^n p_j(x) p_j(y), summed in ascending j.
///
/// When check_cd is set, |x - y| exceeds cd_switchover(x) and params holds a_{n+1},
/// the Christoffel-Darboux closed form
///   a_{n+1} [p_{n+1}(x) p_n(y) - p_n(x) p_{n+1}(y)] / (x - y)
/// is evaluated as well; a disagreement larger than 1e-8 * sqrt(K_n(x,x) K_n(y,y))
/// throws CdFormulaMismatch.
double kernel(const JacobiParams& params, double x, double y, std::size_t n, bool check_cd = true);

/// Closed-form CD value, or nullopt when a_{n+1} is not stored or x == y.
std::optional<double> kernel_cd_formula(const JacobiParams& params, double x, double y,
                                        std::size_t n);

enum class ScalingMode { plain, weak };

// values(i, k) = K_n(x0 + o_i * scale, x0 + o_k * scale) / K_n(x0, x0) with
// scale = 1/n (plain) or 1/(n rho_n) (weak).
struct KernelGrid {
  double x0 = 0.0;
  std::size_t n = 0;
  std::vector<double> offsets;
  std::vector<double> values;  // row-major, offsets.size()^2
  ScalingMode scaling_mode = ScalingMode::plain;
  double rho_n = 0.0;          // w(x0) K_n(x0,x0) / n, weak mode only

  double at(std::size_t i, std::size_t k) const { return values[i * offsets.size() + k]; }
};

KernelGrid scaled_grid(const JacobiParams& params, double x0, std::size_t n,
                       std::span<const double> offsets, ScalingMode mode,
                       std::optional<double> w_x0 = std::nullopt);

/// sin(pi rho s) / (pi rho s), equal to 1 at s = 0.
double sinc_reference(double rho, double s);

/// max_{i,k} |values(i,k) - sinc(b - a)|; rho is ignored (taken as 1) in weak mode.
double max_sinc_deviation(const KernelGrid& grid, double rho);

/// Offsets -limit, -limit + step, ..., limit (symmetric, contains 0 when limit/step is integral).
std::vector<double> symmetric_offsets(double limit, double step);

/// max over a symmetric grid |a| <= A (step <= 0.1) of
/// |K_n(x0 + a/n, x0 + a/n) / K_n(x0, x0) - 1|.
double wiggle_deviation(const JacobiParams& params, double x0, std::size_t n, double A);

/// d/da (1/n) K_n(x0 + a/n, x0 + a/n) at a = 0 through the variation-of-parameters
/// formula (2/n^2) sum_j [p_j^2 sum_{k<=j} p_k q_k - q_j p_j sum_{k<=j} p_k^2].
double diagonal_derivative(const JacobiParams& params, double x0, std::size_t n);

/// Central difference of a -> (1/n) K_n(x0 + a/n, x0 + a/n) at a = 0, step h in a.
double diagonal_derivative_fd(const JacobiParams& params, double x0, std::size_t n, double h = 1e-4);

/// p_n'(x0) = sum_{m<n} (p_n q_m - p_m q_n) p_m, all at x0.
double derivative_via_identity(const JacobiParams& params, double x0, std::size_t n);

/// p_n'(x0) from a five-point central difference.
double derivative_finite_difference(const JacobiParams& params, double x0, std::size_t n);

/// |identity - finite difference| / max(1, |finite difference|).
double derivative_identity_check(const JacobiParams& params, double x0, std::size_t n);

}  // namespace jlab
