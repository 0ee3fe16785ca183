#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "jacobi_lab/jacobi_params.hpp"

namespace jlab {

// Comparisons are made in the log domain (log_lhs, log_rhs); lhs/rhs may be
// +inf when the true values exceed the double range.
struct BoundReport {
  double x0 = 0.0;
  std::complex<double> z;
  std::size_t n = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  double constant_C = 0.0;
  bool holds = false;
  double margin = 0.0;  // rhs - lhs
};

struct BoundOptions {
  // Multiplies the constant in the exponent of the right side. 1 is the
  // theorem; smaller values are for negative controls and fault injection.
  double exponent_scale = 1.0;
};

/// (1/(n+1)) sum_{j<=n} ||T_j(x0 + z/(n+1))||^2 <= C exp(2 C |z| / alpha_-),
/// C = max_{m<=n} (1/(m+1)) sum_{j<=m} ||T_j(x0)||^2, alpha_- over a_1..a_n.
BoundReport check_cesaro_bound(const JacobiParams& params, double x0, std::complex<double> z,
                               std::size_t n, const BoundOptions& options = {});

/// ||T_n(x0 + z/(n+1))|| <= C^{1/2} exp(C |z| / alpha_-), C = max_{m<=n} ||T_m(x0)||^2.
BoundReport check_sup_bound(const JacobiParams& params, double x0, std::complex<double> z,
                            std::size_t n, const BoundOptions& options = {});

/// Constant C3 with ||A'_k - A_k|| <= C3 (1/alpha_- + 1/alpha'_-) (|da_k| + |db_k|)
/// for every k, at energy x0 (Frobenius norm, entrywise bound, never below 2).
double perturbation_constant(double x0, double beta, double alpha_minus, double alpha_minus_perturbed);

/// ||T'_n(x0)|| <= C1 exp(C1^2 C2 C3 (1/alpha_- + 1/alpha'_-)) for a_j' = a_j + da_j,
/// b_j' = b_j + db_j, C1 = max_{m<=n} ||T_m(x0)||, C2 = sum_{k<=n} |da_k| + |db_k|.
/// Throws InvalidPerturbation if some a_j + da_j <= 0.
BoundReport check_l1_perturbation(const JacobiParams& params, std::span<const double> delta_a,
                                  std::span<const double> delta_b, double x0, std::size_t n,
                                  const BoundOptions& options = {});

/// Relative Frobenius distance between (1 + B_n) ... (1 + B_1) and T_n^{-1} T'_n,
/// B_k = T_k^{-1} (A'_k - A_k) T_{k-1}, where A'_k = A_k(x0 + z/(n+1)).
double telescoping_defect(const JacobiParams& params, double x0, std::complex<double> z, std::size_t n);

/// Same identity for a coefficient perturbation at fixed energy x0.
double telescoping_defect(const JacobiParams& params, const JacobiParams& perturbed, double x0,
                          std::size_t n);

/// Number of consecutive radii r_i < r_{i+1} along the ray z = r e^{i angle} where the
/// Cesaro left side decreases by more than 1e-9 relative. Diagnostic only.
std::size_t ray_monotonicity_violations(const JacobiParams& params, double x0, double angle,
                                        std::span<const double> radii, std::size_t n);

}  // namespace jlab
