#include "jacobi_lab/transfer.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "jacobi_lab/errors.hpp"

namespace jlab {

namespace {

void require_steps(const JacobiParams& params, std::size_t n, const char* who) {
  if (n > params.size()) {
    throw ParameterExhausted(std::string(who) + ": " + std::to_string(n) +
                             " steps requested, " + std::to_string(params.size()) +
                             " parameters available");
  }
}

}  // namespace

RealMatrix2 step_matrix(const JacobiParams& params, std::size_t j, double x) {
  const double a = params.a(j);
  return {(x - params.b(j)) / a, -1.0 / a, a, 0.0};
}

TransferMatrix step_matrix(const JacobiParams& params, std::size_t j, std::complex<double> z) {
  const double a = params.a(j);
  return {(z - params.b(j)) / a, std::complex<double>(-1.0 / a), std::complex<double>(a),
          std::complex<double>(0.0)};
}

TransferMatrix transfer_matrix(const JacobiParams& params, std::complex<double> z, std::size_t n) {
  require_steps(params, n, "transfer_matrix");
  auto t = TransferMatrix::identity();
  for (std::size_t j = 1; j <= n; ++j) t = step_matrix(params, j, z) * t;
  return t;
}

RealMatrix2 transfer_matrix(const JacobiParams& params, double x, std::size_t n) {
  require_steps(params, n, "transfer_matrix");
  auto t = RealMatrix2::identity();
  for (std::size_t j = 1; j <= n; ++j) t = step_matrix(params, j, x) * t;
  return t;
}

double transfer_norm_cesaro(const JacobiParams& params, double x, std::size_t n) {
  require_steps(params, n, "transfer_norm_cesaro");
  auto t = RealMatrix2::identity();
  double sum = t.frobenius_sq();
  for (std::size_t j = 1; j <= n; ++j) {
    t = step_matrix(params, j, x) * t;
    sum += t.frobenius_sq();
  }
  return sum / static_cast<double>(n + 1);
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

TransferNormProfile transfer_norm_profile(const JacobiParams& params, std::complex<double> z,
                                          std::size_t n) {
  require_steps(params, n, "transfer_norm_profile");
  constexpr double kRenorm = 1e100;
  TransferNormProfile out;
  out.log_norm_sq.reserve(n + 1);
  out.log_cesaro_avg.reserve(n + 1);

  auto t = TransferMatrix::identity();
  double log_scale = 0.0;  // true T_j = exp(log_scale) * t
  double log_sum = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= n; ++j) {
    if (j > 0) t = step_matrix(params, j, z) * t;
    double f = t.frobenius();
    if (f > kRenorm) {
      t = t * (1.0 / f);
      log_scale += std::log(f);
      f = 1.0;
    }
    const double lns = 2.0 * (log_scale + std::log(f));
    out.log_norm_sq.push_back(lns);
    log_sum = log_add_exp(log_sum, lns);
    out.log_cesaro_avg.push_back(log_sum - std::log(static_cast<double>(j + 1)));
  }
  return out;
}

}  // namespace jlab
