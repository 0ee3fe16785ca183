#include "jacobi_lab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "jacobi_lab/errors.hpp"
#include "jacobi_lab/polynomials.hpp"
#include "jacobi_lab/zeros.hpp"

namespace jlab {

namespace {

[[noreturn]] void herglotz_fail(double x, double epsilon, cplx m, std::int64_t shift) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "Im m <= 0 at x=" << x << " eps=" << epsilon << " shift=" << shift << " (m=" << m << ")";
  throw HerglotzViolation(msg.str());
}

// Raw orbit values only, shifts 0..span.
std::vector<cplx> raw_orbit(const ErgodicModel& model, std::int64_t omega_shift, double x,
                            double epsilon, std::size_t span, std::size_t depth) {
  const auto params = realize(model, omega_shift, depth + 1);
  const cplx z(x, epsilon);
  cplx m = free_field_m(z, params.a(depth + 1), params.b(depth + 1));
  std::vector<cplx> out(span + 1);
  const auto av = params.a_values();
  const auto bv = params.b_values();
  double re = m.real();
  double im = m.imag();
  for (std::size_t j = depth + 1; j-- > 0;) {
    // 1 / w with w = -z + b - a^2 m; Im w <= -epsilon keeps |w| away from 0
    const double a2 = av[j] * av[j];
    const double wr = bv[j] - x - a2 * re;
    const double wi = -epsilon - a2 * im;
    const double inv = 1.0 / (wr * wr + wi * wi);
    re = wr * inv;
    im = -wi * inv;
    if (!(im > 0.0)) herglotz_fail(x, epsilon, {re, im}, omega_shift + static_cast<std::int64_t>(j));
    if (j <= span) out[j] = {re, im};
  }
  return out;
}

// Running maximum that lets NaN through instead of silently dropping it.
void track_worst(double& worst, double value) {
  if (!(value <= worst)) worst = value;
}

}  // namespace

MBoundary make_boundary(double x, double epsilon, cplx m) {
  if (!(m.imag() > 0.0)) herglotz_fail(x, epsilon, m, 0);
  MBoundary out;
  out.x = x;
  out.epsilon = epsilon;
  out.m = m;
  out.w = m.imag() / std::numbers::pi;
  out.phi = -std::arg(-m);
  return out;
}

cplx free_field_m(cplx z, double a, double b) {
  const cplx shift = z - b;
  const cplx root = std::sqrt(shift * shift - 4.0 * a * a);
  const cplx m1 = (-shift + root) / (2.0 * a * a);
  const cplx m2 = (-shift - root) / (2.0 * a * a);
  return m1.imag() >= m2.imag() ? m1 : m2;
}

std::size_t boundary_depth(std::size_t span, double epsilon, double depth_factor) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("boundary_depth: epsilon must be positive");
  return span + static_cast<std::size_t>(std::ceil(depth_factor / epsilon));
}

std::vector<MBoundary> m_boundary(const ErgodicModel& model, std::int64_t omega_shift, double x,
                                  double epsilon, std::size_t depth) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("m_boundary: epsilon must be positive");
  if (depth < 1) throw std::invalid_argument("m_boundary: depth must be >= 1");
  const auto orbit = raw_orbit(model, omega_shift, x, epsilon, depth, depth);
  std::vector<MBoundary> out;
  out.reserve(orbit.size());
  for (const auto& m : orbit) out.push_back(make_boundary(x, epsilon, m));
  return out;
}

BoundaryOrbit boundary_orbit(const ErgodicModel& model, std::int64_t omega_shift, double x,
                             std::size_t span, const BoundaryOptions& options) {
  if (!(options.epsilon > 0.0) || options.levels < 1 || !(options.ratio > 1.0)) {
    throw std::invalid_argument("boundary_orbit: need epsilon > 0, levels >= 1, ratio > 1");
  }
  std::vector<double> eps(options.levels);
  std::vector<std::vector<cplx>> levels;
  for (std::size_t k = 0; k < options.levels; ++k) {
    eps[k] = options.epsilon * std::pow(options.ratio, static_cast<double>(options.levels - 1 - k));
    levels.push_back(raw_orbit(model, omega_shift, x, eps[k], span,
                               boundary_depth(span, eps[k], options.depth_factor)));
  }

  BoundaryOrbit out;
  out.x = x;
  out.epsilon = options.epsilon;
  out.m = levels.back();
  if (options.levels == 1) return out;

  // Neville's scheme evaluated at epsilon = 0, pointwise in the shift.
  std::vector<cplx> extrap(span + 1);
  std::vector<cplx> tab(options.levels);
  double estimate = 0.0;
  for (std::size_t j = 0; j <= span; ++j) {
    for (std::size_t k = 0; k < options.levels; ++k) tab[k] = levels[k][j];
    cplx finer = tab[options.levels - 1];
    for (std::size_t order = 1; order < options.levels; ++order) {
      if (order + 1 == options.levels) finer = tab[1];  // same order, finest levels only
      for (std::size_t i = 0; i + order < options.levels; ++i) {
        tab[i] = (eps[i] * tab[i + 1] - eps[i + order] * tab[i]) / (eps[i] - eps[i + order]);
      }
    }
    extrap[j] = tab[0];
    track_worst(estimate, std::abs(tab[0] - finer) / std::abs(tab[0]));
  }

  double change = 0.0;
  bool upper = true;
  for (std::size_t j = 0; j <= span; ++j) {
    change = std::max(change, std::abs(extrap[j] - out.m[j]) / std::abs(out.m[j]));
    upper = upper && extrap[j].imag() > 0.0;
  }
  out.max_relative_change = change;
  if (upper && change <= options.agreement) {
    out.m = std::move(extrap);
    out.extrapolated = true;
    out.error_estimate = estimate;
  }
  return out;
}

DeiftSimonWave deift_simon_wave(const ErgodicModel& model, std::int64_t omega_shift, double x,
                                double epsilon, std::size_t n) {
  BoundaryOptions options;
  options.epsilon = epsilon;
  return deift_simon_wave(model, omega_shift, x, n, options);
}

DeiftSimonWave deift_simon_wave(const ErgodicModel& model, std::int64_t omega_shift, double x,
                                std::size_t n, const BoundaryOptions& options) {
  const auto orbit = boundary_orbit(model, omega_shift, x, n + 1, options);

  DeiftSimonWave wave;
  wave.x = x;
  wave.epsilon = options.epsilon;
  wave.extrapolated = orbit.extrapolated;
  wave.m = orbit.m;
  wave.a.resize(n + 2);
  std::vector<double> b(n + 2);
  for (std::size_t k = 0; k <= n + 1; ++k) {
    const auto c = model.at(omega_shift + static_cast<std::int64_t>(k));
    wave.a[k] = c.a;
    b[k] = c.b;
  }

  const auto seed = make_boundary(x, orbit.epsilon, orbit.m[0]);
  const double root = std::sqrt(seed.m.imag());
  wave.u.resize(n + 2);
  wave.u[0] = cplx(1.0 / (wave.a[0] * root), 0.0);
  wave.u[1] = -seed.m / root;
  for (std::size_t k = 1; k <= n; ++k) {
    wave.u[k + 1] = ((x - b[k]) * wave.u[k] - wave.a[k - 1] * wave.u[k - 1]) / wave.a[k];
  }

  wave.s.resize(n + 2);
  wave.s[0] = 0.0;
  for (std::size_t k = 1; k <= n + 1; ++k) {
    wave.s[k] = wave.s[k - 1] + make_boundary(x, orbit.epsilon, orbit.m[k - 1]).phi;
  }
  return wave;
}

double wronskian_defect(const DeiftSimonWave& wave) {
  double worst = 0.0;
  const cplx target(0.0, -2.0);
  for (std::size_t k = 0; k + 1 < wave.u.size(); ++k) {
    const cplx w = wave.a[k] * (wave.u[k + 1] * std::conj(wave.u[k]) - std::conj(wave.u[k + 1]) * wave.u[k]);
    track_worst(worst, std::abs(w - target));
  }
  return worst;
}

double phase_factorization_defect(const DeiftSimonWave& wave) {
  double worst = 0.0;
  for (std::size_t k = 0; k < wave.u.size(); ++k) {
    const double u0_shifted = 1.0 / (wave.a[k] * std::sqrt(wave.m[k].imag()));
    const cplx lhs = wave.u[k] * std::polar(1.0, wave.s[k]);
    track_worst(worst, std::abs(lhs - u0_shifted) / u0_shifted);
  }
  return worst;
}

std::vector<double> recover_p_from_u(const DeiftSimonWave& wave, std::size_t n) {
  if (n + 2 > wave.u.size()) throw ParameterExhausted("recover_p_from_u: wave too short");
  const double im1 = wave.u[1].imag();
  if (im1 == 0.0) throw std::domain_error("recover_p_from_u: Im u_1 = 0 (degenerate normalization)");
  std::vector<double> p(n + 1);
  for (std::size_t j = 0; j <= n; ++j) p[j] = wave.u[j + 1].imag() / im1;
  return p;
}

double p_recovery_error(const DeiftSimonWave& wave, const ErgodicModel& model, std::int64_t omega_shift,
                        std::size_t n) {
  const auto recovered = recover_p_from_u(wave, n);
  const auto polys = evaluate_polys(realize(model, omega_shift, n), wave.x, n);
  const double scale = std::exp(polys.scale_log);
  double sum = 0.0;
  for (double v : polys.p) sum += v * v;
  const double rms = std::sqrt(sum / static_cast<double>(n + 1)) * scale;
  double worst = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double ref = polys.p[j] * scale;
    track_worst(worst, std::abs(recovered[j] - ref) / std::max(std::abs(ref), rms));
  }
  return worst;
}

CesaroAverages cesaro_averages(const ErgodicModel& model, std::int64_t omega_shift, double x,
                               double epsilon, std::size_t n) {
  if (n < 1) throw std::invalid_argument("cesaro_averages: n must be >= 1");
  const auto params = realize(model, omega_shift, n);
  const auto polys = evaluate_polys(params, x, n);
  const double scale2 = std::exp(2.0 * polys.scale_log);

  CesaroAverages out;
  out.n = n;
  double sp = 0.0;
  double sq = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    sp += polys.p[j] * polys.p[j];
    sq += polys.q[j] * polys.q[j];
  }
  const double nd = static_cast<double>(n);
  out.avg_p2 = sp * scale2 / (nd + 1.0);
  out.avg_q2 = sq * scale2 / (nd + 1.0);

  const auto wave = deift_simon_wave(model, omega_shift, x, epsilon, n);
  double si = 0.0;
  cplx su(0.0, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    si += wave.u[j].imag() * wave.u[j].imag();
    su += wave.u[j] * wave.u[j];
  }
  out.avg_im_u2 = si / nd;
  out.avg_u2 = su / nd;
  out.rho_L = out.avg_im_u2 / std::numbers::pi;
  out.w = wave.m[0].imag() / std::numbers::pi;
  out.nu_below = static_cast<double>(eig_count(params, n, x)) / nd;
  out.extrapolated = wave.extrapolated;
  return out;
}

}  // namespace jlab
