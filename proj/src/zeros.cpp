#include "jacobi_lab/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "jacobi_lab/errors.hpp"
#include "jacobi_lab/kernel.hpp"
#include "jacobi_lab/polynomials.hpp"

namespace jlab {

namespace {

void require_dimension(const JacobiParams& params, std::size_t n, const char* who) {
  if (n > params.size()) {
    throw ParameterExhausted(std::string(who) + ": dimension " + std::to_string(n) +
                             " exceeds " + std::to_string(params.size()) + " parameters");
  }
}

// Bisection bracket for the whole spectrum of J_{n;F}.
std::pair<double, double> gershgorin(const JacobiParams& params, std::size_t n) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 1; i <= n; ++i) {
    const double r = (i > 1 ? params.a(i - 1) : 0.0) + (i < n ? params.a(i) : 0.0);
    lo = std::min(lo, params.b(i) - r);
    hi = std::max(hi, params.b(i) + r);
  }
  const double pad = 1e-12 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
  return {lo - pad, hi + pad};
}

// LDL^T pivots of J_{n;F} - E over cached coefficients.
class Sturm {
 public:
  Sturm(const JacobiParams& params, std::size_t n) : b_(params.b_values().data()), n_(n), a2_(n) {
    double amax = 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      a2_[i + 1] = params.a_values()[i] * params.a_values()[i];
      amax = std::max(amax, a2_[i + 1]);
    }
    pivmin_ = std::numeric_limits<double>::min() * amax;
  }

  std::size_t count(double E) const {
    std::size_t c = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      d = (b_[i] - E) - (i ? a2_[i] / d : 0.0);
      if (std::abs(d) < pivmin_) d = pivmin_;
      c += d < 0.0;
    }
    return c;
  }

  // count(E) together with det'(E) / det(E) of det(J - E), via d_i' / d_i.
  std::size_t count_and_log_derivative(double E, double& log_derivative) const {
    std::size_t c = 0;
    double d = 1.0;
    double dd = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double q = i ? a2_[i] / d : 0.0;
      dd = -1.0 + (i ? q * dd / d : 0.0);
      d = (b_[i] - E) - q;
      if (std::abs(d) < pivmin_) d = pivmin_;
      c += d < 0.0;
      sum += dd / d;
    }
    log_derivative = sum;
    return c;
  }

  // Eigenvalue k (0-based) given count(l) <= k < count(u), to absolute
  // tolerance tol. Bisection until k is the only eigenvalue in (l, u], then
  // safeguarded Newton on det(J - E); the answer is always certified by a
  // bracket of width <= tol with count(l) <= k < count(u).
  double eigenvalue(std::size_t k, double l, double u, double tol) const {
    return eigenvalue(k, l, count(l), u, count(u), tol);
  }

  double eigenvalue(std::size_t k, double l, std::size_t cl, double u, std::size_t cu, double tol) const {
    while (u - l > tol && (cl != k || cu != k + 1)) {
      const double mid = 0.5 * (l + u);
      if (mid <= l || mid >= u) return mid;
      const std::size_t c = count(mid);
      if (c <= k) {
        l = mid;
        cl = c;
      } else {
        u = mid;
        cu = c;
      }
    }
    double x = 0.5 * (l + u);
    for (int iter = 0; iter < 200 && u - l > tol; ++iter) {
      double r = 0.0;
      const std::size_t c = count_and_log_derivative(x, r);
      if (c <= k) {
        l = x;
      } else {
        u = x;
      }
      double next = x - 1.0 / r;
      if (!std::isfinite(next) || next <= l || next >= u) next = 0.5 * (l + u);
      if (std::abs(next - x) < 0.25 * tol) {
        // certify
        const double lo = std::max(l, next - 0.5 * tol);
        const double hi = std::min(u, next + 0.5 * tol);
        if (count(lo) <= k) l = lo;
        if (count(hi) > k) u = hi;
        if (u - l <= tol) break;
        next = 0.5 * (l + u);
      }
      x = next;
    }
    return 0.5 * (l + u);
  }

 private:
  const double* b_;
  std::size_t n_;
  std::vector<double> a2_;  // a2_[i] = a_i^2, i = 1..n-1
  double pivmin_ = 0.0;
};

}  // namespace

std::size_t eig_count(const JacobiParams& params, std::size_t n, double E) {
  if (n == 0) return 0;
  require_dimension(params, n, "eig_count");
  return Sturm(params, n).count(E);
}

std::size_t sign_changes(const JacobiParams& params, std::size_t n, double E) {
  const auto s = evaluate_polys(params, E, n);
  std::size_t changes = 0;
  int last = 0;
  for (double v : s.p) {
    const int sg = (v > 0.0) - (v < 0.0);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++changes;
    last = sg;
  }
  return changes;
}

double eigenvalue(const JacobiParams& params, std::size_t n, std::size_t k, double tol) {
  require_dimension(params, n, "eigenvalue");
  if (k >= n) throw std::out_of_range("eigenvalue: index " + std::to_string(k) + " >= n");
  auto [lo, hi] = gershgorin(params, n);
  return Sturm(params, n).eigenvalue(k, lo, hi, tol);
}

std::vector<double> all_zeros(const JacobiParams& params, std::size_t n) {
  require_dimension(params, n, "all_zeros");
  if (n == 0) return {};
  auto [lo, hi] = gershgorin(params, n);
  return zeros_in_window(params, n, 0.5 * (lo + hi), 0.5 * (hi - lo)).zeros;
}

std::optional<double> ZeroWindow::at(long j) const {
  const long pos = static_cast<long>(first_index) + j;
  if (pos < 0 || pos >= static_cast<long>(zeros.size())) return std::nullopt;
  return zeros[static_cast<std::size_t>(pos)];
}

ZeroWindow zeros_in_window(const JacobiParams& params, std::size_t n, double x0, double W) {
  if (!(W > 0.0)) throw std::invalid_argument("zeros_in_window: W must be positive");
  require_dimension(params, n, "zeros_in_window");

  ZeroWindow win;
  win.x0 = x0;
  win.n = n;
  win.half_width = W;
  if (n == 0) return win;

  auto [glo, ghi] = gershgorin(params, n);
  const double lo = std::max(x0 - W, glo);
  const double hi = std::min(x0 + W, ghi);
  if (lo > hi) return win;
  const double hi_open = std::nextafter(hi, std::numeric_limits<double>::infinity());

  const Sturm sturm(params, n);
  const std::size_t below = sturm.count(lo);
  const std::size_t upto = sturm.count(hi_open);
  if (upto - below > kMaxWindowZeros) {
    throw WindowTooLarge("zeros_in_window: " + std::to_string(upto - below) +
                         " zeros in window, limit " + std::to_string(kMaxWindowZeros));
  }

  const double tol = 1e-13 * (1.0 + std::abs(x0));
  win.zeros.reserve(upto - below);
  // Split (l, u] until each piece holds one eigenvalue, in ascending order.
  struct Piece {
    double l, u;
    std::size_t cl, cu;
  };
  std::vector<Piece> stack{{lo, hi_open, below, upto}};
  while (!stack.empty()) {
    const Piece p = stack.back();
    stack.pop_back();
    if (p.cu == p.cl) continue;
    if (p.cu == p.cl + 1) {
      win.zeros.push_back(sturm.eigenvalue(p.cl, p.l, p.cl, p.u, p.cu, tol));
      continue;
    }
    const double mid = 0.5 * (p.l + p.u);
    if (p.u - p.l <= tol || mid <= p.l || mid >= p.u) {
      // unresolvable cluster
      win.zeros.insert(win.zeros.end(), p.cu - p.cl, mid);
      continue;
    }
    const std::size_t cm = sturm.count(mid);
    stack.push_back({mid, p.u, cm, p.cu});
    stack.push_back({p.l, mid, p.cl, cm});
  }
  // Index by the Sturm count so a zero sitting on x0 gets index 0.
  const std::size_t strictly_below_x0 = sturm.count(x0);
  win.first_index = std::clamp(strictly_below_x0, below, upto) - below;
  return win;
}

ClockStats clock_stats(const ZeroWindow& window, std::optional<double> rho_ref) {
  if (window.zeros.size() < 4 || !window.at(0) || !window.at(1)) {
    throw InsufficientZeros("clock_stats: need at least four zeros including x_0 and x_1, have " +
                            std::to_string(window.zeros.size()));
  }
  ClockStats out;
  out.first_j = window.min_j();
  const double base = *window.at(1) - *window.at(0);
  const double nd = static_cast<double>(window.n);
  if (rho_ref) out.strong_errors.emplace();
  for (long j = window.min_j(); j < window.max_j(); ++j) {
    const double gap = *window.at(j + 1) - *window.at(j);
    out.quasi_ratios.push_back(gap / base);
    if (rho_ref) out.strong_errors->push_back(std::abs(nd * gap - 1.0 / *rho_ref));
  }
  return out;
}

std::size_t interlacing_defect(const JacobiParams& params, const JacobiParams& params_shifted,
                               std::size_t n, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("interlacing_defect: n must be >= 1");
  require_dimension(params, n, "interlacing_defect");
  require_dimension(params_shifted, n - 1, "interlacing_defect");
  for (std::size_t j = 1; j < n; ++j) {
    if (params_shifted.a(j) != params.a(j + 1) || params_shifted.b(j) != params.b(j + 1)) {
      throw std::invalid_argument("interlacing_defect: second family is not the once-shifted first");
    }
  }
  if (lo > hi) std::swap(lo, hi);
  const double hi_open = std::nextafter(hi, std::numeric_limits<double>::infinity());
  const auto in_window = [&](const JacobiParams& p, std::size_t dim) {
    return static_cast<long>(eig_count(p, dim, hi_open)) - static_cast<long>(eig_count(p, dim, lo));
  };
  const long diff = in_window(params, n) - in_window(params_shifted, n - 1);
  return static_cast<std::size_t>(diff < 0 ? -diff : diff);
}

MarkovStieltjesResult markov_stieltjes_check(const JacobiParams& params,
                                             const std::function<double(double)>& mu_cdf,
                                             std::size_t n, std::size_t j, std::size_t k) {
  if (k < 1 || j < k + 2 || j > n) {
    throw std::out_of_range("markov_stieltjes_check: need 1 <= k, k + 2 <= j <= n (got k=" +
                            std::to_string(k) + ", j=" + std::to_string(j) + ", n=" +
                            std::to_string(n) + ")");
  }
  const auto zeros = all_zeros(params, n);
  MarkovStieltjesResult out;
  out.lhs = mu_cdf(zeros[j - 1]) - mu_cdf(zeros[k - 1]);
  for (std::size_t l = k + 1; l <= j - 1; ++l) {
    const double x = zeros[l - 1];
    out.rhs += 1.0 / kernel(params, x, x, n, false);
  }
  out.holds = out.lhs >= out.rhs - 1e-10;
  return out;
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
         std::asin(0.5 * x) / std::numbers::pi;
}

}  // namespace jlab
