#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace jlab {

/// Finite prefix {a_j, b_j}, j = 1..size(), of a bounded Jacobi matrix.
///
/// Indices are 1-based to match the three-term recurrence
///   x p_n = a_{n+1} p_{n+1} + b_{n+1} p_n + a_n p_{n-1}.
/// Every a_j must be strictly positive; alpha_minus/alpha_plus/beta are cached
/// at construction.
class JacobiParams {
 public:
  JacobiParams() = default;
  JacobiParams(std::vector<double> a, std::vector<double> b);

  /// a_j = 1, b_j = 0 (Chebyshev polynomials of the second kind in x/2).
  static JacobiParams free(std::size_t n);

  std::size_t size() const noexcept { return a_.size(); }

  double a(std::size_t j) const { return a_.at(j - 1); }
  double b(std::size_t j) const { return b_.at(j - 1); }

  std::span<const double> a_values() const noexcept { return a_; }
  std::span<const double> b_values() const noexcept { return b_; }

  double alpha_minus() const noexcept { return alpha_minus_; }
  double alpha_plus() const noexcept { return alpha_plus_; }
  double beta() const noexcept { return beta_; }

  /// min a_j over j = 1..n (n clamped to size()).
  double alpha_minus(std::size_t n) const;

  /// Parameters {a_{j+k}, b_{j+k}}: the k-times stripped Jacobi matrix.
  JacobiParams stripped(std::size_t k = 1) const;

  /// First n entries.
  JacobiParams prefix(std::size_t n) const;

  /// Spectrum of every truncation lies in [-bound, bound].
  double spectral_bound() const noexcept { return beta_ + 2.0 * alpha_plus_; }

 private:
  std::vector<double> a_;
  std::vector<double> b_;
  double alpha_minus_ = 0.0;
  double alpha_plus_ = 0.0;
  double beta_ = 0.0;
};

}  // namespace jlab
