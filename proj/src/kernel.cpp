#include "jacobi_lab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "jacobi_lab/errors.hpp"
#include "jacobi_lab/polynomials.hpp"

namespace jlab {

namespace {

// sum_{j<=n} p_j(x) p_j(y) on the stored (scaled) values, ascending j.
double scaled_dot(const PolySequence& sx, const PolySequence& sy, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j <= n; ++j) s += sx.p[j] * sy.p[j];
  return s;
}

double true_kernel(const PolySequence& sx, const PolySequence& sy, std::size_t n) {
  return scaled_dot(sx, sy, n) * std::exp(sx.scale_log + sy.scale_log);
}

}  // namespace

std::optional<double> kernel_cd_formula(const JacobiParams& params, double x, double y,
                                        std::size_t n) {
  if (params.size() < n + 1 || x == y) return std::nullopt;
  const auto sx = evaluate_polys(params, x, n + 1);
  const auto sy = evaluate_polys(params, y, n + 1);
  const double num = sx.p[n + 1] * sy.p[n] - sx.p[n] * sy.p[n + 1];
  return params.a(n + 1) * num / (x - y) * std::exp(sx.scale_log + sy.scale_log);
}

double kernel(const JacobiParams& params, double x, double y, std::size_t n, bool check_cd) {
  const bool with_cd = check_cd && params.size() >= n + 1 && std::abs(x - y) > cd_switchover(x);
  const std::size_t len = with_cd ? n + 1 : n;
  const auto sx = evaluate_polys(params, x, len);
  const auto sy = evaluate_polys(params, y, len);
  const double direct = scaled_dot(sx, sy, n);

  if (with_cd) {
    const double cd = params.a(n + 1) * (sx.p[n + 1] * sy.p[n] - sx.p[n] * sy.p[n + 1]) / (x - y);
    const double scale = std::sqrt(scaled_dot(sx, sx, n) * scaled_dot(sy, sy, n));
    if (std::abs(direct - cd) > 1e-8 * scale) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "kernel: CD formula mismatch at x=" << x << " y=" << y << " n=" << n
          << " (direct " << direct << ", closed form " << cd << ", stored scale)";
      throw CdFormulaMismatch(msg.str());
    }
  }
  return direct * std::exp(sx.scale_log + sy.scale_log);
}

KernelGrid scaled_grid(const JacobiParams& params, double x0, std::size_t n,
                       std::span<const double> offsets, ScalingMode mode,
                       std::optional<double> w_x0) {
  const auto center = evaluate_polys(params, x0, n);
  const double center_sum = scaled_dot(center, center, n);
  if (!(center_sum > 0.0) || !std::isfinite(center_sum)) {
    throw DegenerateCenter("scaled_grid: K_n(x0,x0) is not positive and finite");
  }

  KernelGrid grid;
  grid.x0 = x0;
  grid.n = n;
  grid.offsets.assign(offsets.begin(), offsets.end());
  grid.scaling_mode = mode;

  const double nd = static_cast<double>(std::max<std::size_t>(n, 1));
  double unit = 1.0 / nd;
  if (mode == ScalingMode::weak) {
    if (!w_x0 || !(*w_x0 > 0.0)) {
      throw std::invalid_argument("scaled_grid: weak mode needs a positive weight w(x0)");
    }
    grid.rho_n = *w_x0 * true_kernel(center, center, n) / nd;
    unit = 1.0 / (nd * grid.rho_n);
  }

  std::vector<PolySequence> seqs;
  seqs.reserve(offsets.size());
  for (double o : offsets) seqs.push_back(o == 0.0 ? center : evaluate_polys(params, x0 + o * unit, n));

  const std::size_t m = offsets.size();
  grid.values.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = i; k < m; ++k) {
      const double ratio = scaled_dot(seqs[i], seqs[k], n) / center_sum *
                           std::exp(seqs[i].scale_log + seqs[k].scale_log - 2.0 * center.scale_log);
      grid.values[i * m + k] = ratio;
      grid.values[k * m + i] = ratio;
    }
  }
  return grid;
}

double sinc_reference(double rho, double s) {
  const double arg = std::numbers::pi * rho * s;
  if (arg == 0.0) return 1.0;
  return std::sin(arg) / arg;
}

double max_sinc_deviation(const KernelGrid& grid, double rho) {
  const double r = grid.scaling_mode == ScalingMode::weak ? 1.0 : rho;
  double worst = 0.0;
  const std::size_t m = grid.offsets.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const double ref = sinc_reference(r, grid.offsets[k] - grid.offsets[i]);
      worst = std::max(worst, std::abs(grid.at(i, k) - ref));
    }
  }
  return worst;
}

std::vector<double> symmetric_offsets(double limit, double step) {
  if (!(step > 0.0) || limit < 0.0) throw std::invalid_argument("symmetric_offsets: need step > 0, limit >= 0");
  const auto half = static_cast<long>(std::ceil(limit / step - 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * half + 1));
  for (long k = -half; k <= half; ++k) {
    out.push_back(half == 0 ? 0.0 : limit * static_cast<double>(k) / static_cast<double>(half));
  }
  return out;
}

double wiggle_deviation(const JacobiParams& params, double x0, std::size_t n, double A) {
  if (A < 0.0) throw std::invalid_argument("wiggle_deviation: A must be nonnegative");
  const auto center = evaluate_polys(params, x0, n);
  const double center_sum = scaled_dot(center, center, n);
  if (!(center_sum > 0.0)) throw DegenerateCenter("wiggle_deviation: K_n(x0,x0) is not positive");
  const double nd = static_cast<double>(std::max<std::size_t>(n, 1));

  double worst = 0.0;
  for (double a : symmetric_offsets(A, 0.1)) {
    if (a == 0.0) continue;
    const auto s = evaluate_polys(params, x0 + a / nd, n);
    const double ratio = scaled_dot(s, s, n) / center_sum * std::exp(2.0 * (s.scale_log - center.scale_log));
    worst = std::max(worst, std::abs(ratio - 1.0));
  }
  return worst;
}

double diagonal_derivative(const JacobiParams& params, double x0, std::size_t n) {
  if (n < 1) throw std::invalid_argument("diagonal_derivative: n must be >= 1");
  const auto s = evaluate_polys(params, x0, n);
  double sum_pq = 0.0;
  double sum_pp = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double pj = s.p[j];
    const double qj = s.q[j];
    sum_pq += pj * qj;
    sum_pp += pj * pj;
    total += pj * pj * sum_pq - qj * pj * sum_pp;
  }
  const double nd = static_cast<double>(n);
  return 2.0 / (nd * nd) * total * std::exp(4.0 * s.scale_log);
}

double diagonal_derivative_fd(const JacobiParams& params, double x0, std::size_t n, double h) {
  if (n < 1) throw std::invalid_argument("diagonal_derivative_fd: n must be >= 1");
  const double nd = static_cast<double>(n);
  const auto scaled_diag = [&](double a) { return kernel(params, x0 + a / nd, x0 + a / nd, n, false) / nd; };
  return (scaled_diag(h) - scaled_diag(-h)) / (2.0 * h);
}

double derivative_via_identity(const JacobiParams& params, double x0, std::size_t n) {
  if (n < 1) throw std::invalid_argument("derivative_via_identity: n must be >= 1");
  const auto s = evaluate_polys(params, x0, n);
  double sum_pq = 0.0;
  double sum_pp = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    sum_pq += s.p[m] * s.q[m];
    sum_pp += s.p[m] * s.p[m];
  }
  return (s.p[n] * sum_pq - s.q[n] * sum_pp) * std::exp(3.0 * s.scale_log);
}

double derivative_finite_difference(const JacobiParams& params, double x0, std::size_t n) {
  if (n < 1) throw std::invalid_argument("derivative_finite_difference: n must be >= 1");
  // Step well below the local zero spacing, which is at least ~alpha_minus / n.
  const double h = 0.005 * params.alpha_minus(n) / static_cast<double>(n);
  auto pn = [&](double x) {
    const auto s = evaluate_polys(params, x, n);
    return s.p[n] * std::exp(s.scale_log);
  };
  return (pn(x0 - 2 * h) - 8.0 * pn(x0 - h) + 8.0 * pn(x0 + h) - pn(x0 + 2 * h)) / (12.0 * h);
}

double derivative_identity_check(const JacobiParams& params, double x0, std::size_t n) {
  const double via_identity = derivative_via_identity(params, x0, n);
  const double fd = derivative_finite_difference(params, x0, n);
  return std::abs(via_identity - fd) / std::max(1.0, std::abs(fd));
}

}  // namespace jlab
