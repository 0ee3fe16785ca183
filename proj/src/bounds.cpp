#include "jacobi_lab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "jacobi_lab/errors.hpp"
#include "jacobi_lab/transfer.hpp"

namespace jlab {

namespace {

using cplx = std::complex<double>;

constexpr double kSlack = 1e-10;

void require(const JacobiParams& params, std::size_t n, const char* who) {
  if (n > params.size()) {
    throw ParameterExhausted(std::string(who) + ": n exceeds the stored parameters");
  }
}

double alpha_over(const JacobiParams& params, std::size_t n) {
  return params.alpha_minus(std::max<std::size_t>(n, 1));
}

BoundReport finish(double x0, cplx z, std::size_t n, double log_lhs, double log_rhs, double C) {
  BoundReport r;
  r.x0 = x0;
  r.z = z;
  r.n = n;
  r.log_lhs = log_lhs;
  r.log_rhs = log_rhs;
  r.lhs = std::exp(log_lhs);
  r.rhs = std::exp(log_rhs);
  r.constant_C = C;
  r.holds = log_lhs <= log_rhs + std::log1p(kSlack);
  r.margin = r.rhs - r.lhs;
  return r;
}

// log ||T_m(x0)||_F, m = 0..n, for real x0.
std::vector<double> log_norms(const JacobiParams& params, double x0, std::size_t n) {
  auto profile = transfer_norm_profile(params, cplx(x0, 0.0), n);
  for (auto& v : profile.log_norm_sq) v *= 0.5;
  return profile.log_norm_sq;
}

}  // namespace

BoundReport check_cesaro_bound(const JacobiParams& params, double x0, cplx z, std::size_t n,
                               const BoundOptions& options) {
  require(params, n, "check_cesaro_bound");
  const auto base = transfer_norm_profile(params, cplx(x0, 0.0), n);
  const double log_C = *std::max_element(base.log_cesaro_avg.begin(), base.log_cesaro_avg.end());
  const double C = std::exp(log_C);
  const auto pert = transfer_norm_profile(params, x0 + z / static_cast<double>(n + 1), n);
  const double log_lhs = pert.log_cesaro_avg.back();
  const double log_rhs = log_C + options.exponent_scale * 2.0 * C * std::abs(z) / alpha_over(params, n);
  return finish(x0, z, n, log_lhs, log_rhs, C);
}

BoundReport check_sup_bound(const JacobiParams& params, double x0, cplx z, std::size_t n,
                            const BoundOptions& options) {
  require(params, n, "check_sup_bound");
  const auto base = transfer_norm_profile(params, cplx(x0, 0.0), n);
  const double log_C = *std::max_element(base.log_norm_sq.begin(), base.log_norm_sq.end());
  const double C = std::exp(log_C);
  const auto pert = transfer_norm_profile(params, x0 + z / static_cast<double>(n + 1), n);
  const double log_lhs = 0.5 * pert.log_norm_sq.back();
  const double log_rhs = 0.5 * log_C + options.exponent_scale * C * std::abs(z) / alpha_over(params, n);
  return finish(x0, z, n, log_lhs, log_rhs, C);
}

double perturbation_constant(double x0, double beta, double alpha_minus, double alpha_minus_perturbed) {
  // Entries of A'_k - A_k: -(x0 - b) da / (a a') - db / a', da / (a a'), da.
  const double inv_sum = 1.0 / alpha_minus + 1.0 / alpha_minus_perturbed;
  const double da_coeff = 1.0 + (1.0 + std::abs(x0) + beta) / (alpha_minus * alpha_minus_perturbed);
  const double db_coeff = 1.0 / alpha_minus_perturbed;
  return std::max(2.0, std::max(da_coeff, db_coeff) / inv_sum);
}

BoundReport check_l1_perturbation(const JacobiParams& params, std::span<const double> delta_a,
                                  std::span<const double> delta_b, double x0, std::size_t n,
                                  const BoundOptions& options) {
  require(params, n, "check_l1_perturbation");
  if (delta_a.size() < n || delta_b.size() < n) {
    throw std::invalid_argument("check_l1_perturbation: perturbation shorter than n");
  }
  std::vector<double> a(params.a_values().begin(), params.a_values().begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> b(params.b_values().begin(), params.b_values().begin() + static_cast<std::ptrdiff_t>(n));
  double C2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    a[k] += delta_a[k];
    b[k] += delta_b[k];
    if (!(a[k] > 0.0)) {
      throw InvalidPerturbation("check_l1_perturbation: a_" + std::to_string(k + 1) + " + da is not positive");
    }
    C2 += std::abs(delta_a[k]) + std::abs(delta_b[k]);
  }
  const JacobiParams perturbed(std::move(a), std::move(b));
  const JacobiParams original = params.prefix(n);

  const auto base = log_norms(original, x0, n);
  const double log_C1 = *std::max_element(base.begin(), base.end());
  const double C1 = std::exp(log_C1);
  const double alpha = n > 0 ? original.alpha_minus() : 1.0;
  const double alpha_p = n > 0 ? perturbed.alpha_minus() : 1.0;
  const double beta = n > 0 ? original.beta() : 0.0;
  const double C3 = perturbation_constant(x0, beta, alpha, alpha_p);

  const double log_lhs = log_norms(perturbed, x0, n).back();
  const double log_rhs = log_C1 + options.exponent_scale * C1 * C1 * C2 * C3 * (1.0 / alpha + 1.0 / alpha_p);
  auto r = finish(x0, cplx(0.0, 0.0), n, log_lhs, log_rhs, C3);
  return r;
}

namespace {

double telescope(const std::vector<TransferMatrix>& A, const std::vector<TransferMatrix>& At) {
  // A[k], At[k] hold A_{k+1}, A'_{k+1}.
  auto T_prev = TransferMatrix::identity();
  auto T_tilde = TransferMatrix::identity();
  auto product = TransferMatrix::identity();
  for (std::size_t k = 0; k < A.size(); ++k) {
    const auto T = A[k] * T_prev;
    const auto B = T.adjugate() * (At[k] - A[k]) * T_prev;
    product = (TransferMatrix::identity() + B) * product;
    T_tilde = At[k] * T_tilde;
    T_prev = T;
  }
  const auto direct = T_prev.adjugate() * T_tilde;
  const double defect = (product - direct).frobenius() / std::max(direct.frobenius(), std::numeric_limits<double>::min());
  // overflowed products
  return std::isfinite(defect) ? defect : std::numeric_limits<double>::infinity();
}

}  // namespace

double telescoping_defect(const JacobiParams& params, double x0, cplx z, std::size_t n) {
  require(params, n, "telescoping_defect");
  std::vector<TransferMatrix> A;
  std::vector<TransferMatrix> At;
  const cplx zt = x0 + z / static_cast<double>(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    A.push_back(step_matrix(params, k, cplx(x0, 0.0)));
    At.push_back(step_matrix(params, k, zt));
  }
  return telescope(A, At);
}

double telescoping_defect(const JacobiParams& params, const JacobiParams& perturbed, double x0,
                          std::size_t n) {
  require(params, n, "telescoping_defect");
  require(perturbed, n, "telescoping_defect");
  std::vector<TransferMatrix> A;
  std::vector<TransferMatrix> At;
  for (std::size_t k = 1; k <= n; ++k) {
    A.push_back(step_matrix(params, k, cplx(x0, 0.0)));
    At.push_back(step_matrix(perturbed, k, cplx(x0, 0.0)));
  }
  return telescope(A, At);
}

std::size_t ray_monotonicity_violations(const JacobiParams& params, double x0, double angle,
                                        std::span<const double> radii, std::size_t n) {
  require(params, n, "ray_monotonicity_violations");
  std::size_t bad = 0;
  double prev = -std::numeric_limits<double>::infinity();
  for (double r : radii) {
    const cplx z = std::polar(r, angle);
    const double v = transfer_norm_profile(params, x0 + z / static_cast<double>(n + 1), n).log_cesaro_avg.back();
    if (v < prev + std::log1p(-1e-9)) ++bad;
    prev = v;
  }
  return bad;
}

}  // namespace jlab
