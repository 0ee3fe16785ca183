#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "jacobi_lab/jacobi_params.hpp"

namespace jlab {

/// Number of eigenvalues of the n x n truncation J_{n;F} strictly below E,
/// i.e. the number of zeros of p_n in (-inf, E). Uses the LDL^T pivot signs
/// of J_{n;F} - E; a vanishing pivot is replaced by +pivmin, which places E
/// infinitesimally below itself.
std::size_t eig_count(const JacobiParams& params, std::size_t n, double E);

/// Number of sign changes in p_0(E), ..., p_n(E), zeros skipped. Equals
/// n - eig_count(params, n, E) whenever p_n(E) != 0.
std::size_t sign_changes(const JacobiParams& params, std::size_t n, double E);

/// The k-th eigenvalue (0-based, ascending) of J_{n;F} to absolute tolerance tol.
double eigenvalue(const JacobiParams& params, std::size_t n, std::size_t k, double tol);

/// All zeros of p_n, ascending.
std::vector<double> all_zeros(const JacobiParams& params, std::size_t n);

// Zeros of p_n in [x0 - W, x0 + W], indexed around x0: zero j lives at
// zeros[first_index + j] and x_{-1} < x0 <= x_0.
struct ZeroWindow {
  double x0 = 0.0;
  std::size_t n = 0;
  double half_width = 0.0;
  std::vector<double> zeros;
  std::size_t first_index = 0;  // position of x_0^{(n)}(x0); == zeros.size() if none >= x0

  long min_j() const noexcept { return -static_cast<long>(first_index); }
  long max_j() const noexcept { return static_cast<long>(zeros.size()) - static_cast<long>(first_index) - 1; }
  std::optional<double> at(long j) const;
};

inline constexpr std::size_t kMaxWindowZeros = 1'000'000;

/// Throws WindowTooLarge for windows holding more than kMaxWindowZeros zeros.
ZeroWindow zeros_in_window(const JacobiParams& params, std::size_t n, double x0, double W);

struct ClockStats {
  long first_j = 0;                 // entry i corresponds to j = first_j + i
  std::vector<double> quasi_ratios; // (x_{j+1} - x_j) / (x_1 - x_0)
  std::optional<std::vector<double>> strong_errors;  // |n (x_{j+1} - x_j) - 1/rho_ref|
};

/// Requires at least four zeros, including x_0 and x_1.
ClockStats clock_stats(const ZeroWindow& window, std::optional<double> rho_ref = std::nullopt);

/// |#zeros of p_n(., omega) in [lo, hi] - #zeros of p_{n-1}(., S omega) in [lo, hi]|.
/// params_shifted must be params with its first entry removed.
std::size_t interlacing_defect(const JacobiParams& params, const JacobiParams& params_shifted,
                               std::size_t n, double lo, double hi);

struct MarkovStieltjesResult {
  double lhs = 0.0;  // mu([x_k, x_j])
  double rhs = 0.0;  // sum_{l=k+1}^{j-1} 1 / K_n(x_l, x_l)
  bool holds = false;
};

/// Zeros x_1 < ... < x_n of p_n are 1-based here. Requires 1 <= k, k + 2 <= j <= n.
MarkovStieltjesResult markov_stieltjes_check(const JacobiParams& params,
                                             const std::function<double(double)>& mu_cdf,
                                             std::size_t n, std::size_t j, std::size_t k);

/// CDF of the semicircle law sqrt(4 - x^2) / (2 pi) on [-2, 2], the spectral
/// measure of the free Jacobi matrix.
double semicircle_cdf(double x);

}  // namespace jlab
