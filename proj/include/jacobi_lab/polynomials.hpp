#pragma once

#include <cstddef>
#include <vector>

#include "jacobi_lab/jacobi_params.hpp"

namespace jlab {

// Stored values are true values times exp(-scale_log); scale_log is 0 unless
// the overflow guard fired.
struct PolySequence {
  double x = 0.0;
  std::vector<double> p;  // p_0..p_n
  std::vector<double> q;  // q_0..q_n, second kind: q_0 = 0, q_1 = -1/a_1
  double scale_log = 0.0;

  std::size_t degree() const noexcept { return p.empty() ? 0 : p.size() - 1; }
  bool rescaled() const noexcept { return scale_log != 0.0; }
};

// Running magnitude above which the stored sequence is rescaled.
inline constexpr double kOverflowGuard = 1e150;

/// First- and second-kind orthonormal polynomials at x, degrees 0..n.
/// Throws ParameterExhausted if n > params.size().
PolySequence evaluate_polys(const JacobiParams& params, double x, std::size_t n);

/// Largest relative residual of the three-term recurrence over consecutive
/// triples of seq (both p and q), measured against the magnitude of the terms.
double max_recurrence_residual(const JacobiParams& params, const PolySequence& seq);

}  // namespace jlab
