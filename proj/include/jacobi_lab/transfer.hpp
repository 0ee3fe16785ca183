#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "jacobi_lab/jacobi_params.hpp"

namespace jlab {

template <class T>
struct Mat2 {
  T m11{}, m12{}, m21{}, m22{};

  static constexpr Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }

  constexpr T det() const { return m11 * m22 - m12 * m21; }

  // Inverse through the adjugate; exact for det = 1 up to rounding of det itself.
  Mat2 inverse() const {
    const T d = det();
    return {m22 / d, -m12 / d, -m21 / d, m11 / d};
  }

  // Inverse of a det-1 matrix without dividing by the rounded determinant.
  constexpr Mat2 adjugate() const { return {m22, -m12, -m21, m11}; }

  Mat2 operator*(const Mat2& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
            m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
  }
  Mat2 operator+(const Mat2& o) const { return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22}; }
  Mat2 operator-(const Mat2& o) const { return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22}; }
  Mat2 operator*(double s) const { return {m11 * s, m12 * s, m21 * s, m22 * s}; }

  double frobenius_sq() const {
    return std::norm(std::complex<double>(m11)) + std::norm(std::complex<double>(m12)) +
           std::norm(std::complex<double>(m21)) + std::norm(std::complex<double>(m22));
  }
  double frobenius() const { return std::sqrt(frobenius_sq()); }
};

using RealMatrix2 = Mat2<double>;
/// T_n(z) = A_n(z) ... A_1(z); complex so it covers z off the real axis.
using TransferMatrix = Mat2<std::complex<double>>;

/// One-step matrix A_j(z) = [[(z - b_j)/a_j, -1/a_j], [a_j, 0]], det = 1.
RealMatrix2 step_matrix(const JacobiParams& params, std::size_t j, double x);
TransferMatrix step_matrix(const JacobiParams& params, std::size_t j, std::complex<double> z);

/// T_n(z); n = 0 gives the identity. Throws ParameterExhausted for n > size.
TransferMatrix transfer_matrix(const JacobiParams& params, std::complex<double> z, std::size_t n);
RealMatrix2 transfer_matrix(const JacobiParams& params, double x, std::size_t n);

/// (1/(n+1)) sum_{j=0}^n ||T_j(x)||_F^2 with T_0 = I.
double transfer_norm_cesaro(const JacobiParams& params, double x, std::size_t n);

/// Log-domain norms of T_0(z)..T_n(z), safe when the product grows past the
/// double range. The product is renormalized whenever its norm exceeds 1e100.
struct TransferNormProfile {
  std::vector<double> log_norm_sq;     // log ||T_j||_F^2, j = 0..n
  std::vector<double> log_cesaro_avg;  // log (1/(j+1)) sum_{k<=j} ||T_k||_F^2
};
TransferNormProfile transfer_norm_profile(const JacobiParams& params, std::complex<double> z,
                                          std::size_t n);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

}  // namespace jlab
