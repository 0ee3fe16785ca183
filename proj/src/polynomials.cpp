#include "jacobi_lab/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "jacobi_lab/errors.hpp"

namespace jlab {

namespace {

// Rescale by an exact power of two so ratios between stored values survive bit-for-bit.
constexpr int kRescaleExponent = 500;

}  // namespace

PolySequence evaluate_polys(const JacobiParams& params, double x, std::size_t n) {
  if (n > params.size()) {
    throw ParameterExhausted("evaluate_polys: degree " + std::to_string(n) +
                             " needs " + std::to_string(n) + " parameters, have " +
                             std::to_string(params.size()));
  }
  if (!std::isfinite(x)) throw std::invalid_argument("evaluate_polys: x must be finite");

  PolySequence seq;
  seq.x = x;
  seq.p.resize(n + 1);
  seq.q.resize(n + 1);
  seq.p[0] = 1.0;
  seq.q[0] = 0.0;

  // a_{j-1} p_{j-2} with the conventions a_0 p_{-1} = 0 and a_0 q_{-1} = 1.
  double back_p = 0.0;
  double back_q = 1.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double aj = params.a(j);
    const double shift = x - params.b(j);
    const double pj = (shift * seq.p[j - 1] - back_p) / aj;
    const double qj = (shift * seq.q[j - 1] - back_q) / aj;
    seq.p[j] = pj;
    seq.q[j] = qj;
    back_p = aj * seq.p[j - 1];
    back_q = aj * seq.q[j - 1];

    const double mag = std::max({std::abs(pj), std::abs(qj), std::abs(seq.p[j - 1]),
                                 std::abs(seq.q[j - 1])});
    if (mag > kOverflowGuard) {
      for (std::size_t k = 0; k <= j; ++k) {
        seq.p[k] = std::ldexp(seq.p[k], -kRescaleExponent);
        seq.q[k] = std::ldexp(seq.q[k], -kRescaleExponent);
      }
      back_p = std::ldexp(back_p, -kRescaleExponent);
      back_q = std::ldexp(back_q, -kRescaleExponent);
      seq.scale_log += kRescaleExponent * std::numbers::ln2;
    }
  }
  return seq;
}

double max_recurrence_residual(const JacobiParams& params, const PolySequence& seq) {
  const std::size_t n = seq.degree();
  if (n > params.size()) throw ParameterExhausted("max_recurrence_residual: sequence longer than params");
  const double unit = std::exp(-seq.scale_log);
  double worst = 0.0;
  auto check = [&](const std::vector<double>& v, double back0) {
    // a_j v_j = (x - b_j) v_{j-1} - a_{j-1} v_{j-2}
    for (std::size_t j = 1; j <= n; ++j) {
      const double back = j == 1 ? back0 : params.a(j - 1) * v[j - 2];
      const double lhs = params.a(j) * v[j];
      const double rhs_a = (seq.x - params.b(j)) * v[j - 1];
      const double scale = std::abs(lhs) + std::abs(rhs_a) + std::abs(back);
      if (scale == 0.0) continue;
      worst = std::max(worst, std::abs(lhs - rhs_a + back) / scale);
    }
  };
  check(seq.p, 0.0);
  check(seq.q, unit);
  return worst;
}

}  // namespace jlab
