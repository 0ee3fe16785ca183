#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "jacobi_lab/models.hpp"

namespace jlab {

using cplx = std::complex<double>;

// Boundary data of the half-line m-function at one shift.
struct MBoundary {
  double x = 0.0;
  double epsilon = 0.0;
  cplx m;
  double w = 0.0;    // Im m / pi
  double phi = 0.0;  // -Arg(-m), in (0, pi) when Im m > 0
};

/// Builds the record; throws HerglotzViolation unless Im m > 0.
MBoundary make_boundary(double x, double epsilon, cplx m);

/// Herglotz root of a^2 m^2 + (z - b) m + 1 = 0 (constant-coefficient fixed point).
cplx free_field_m(cplx z, double a, double b);

/// Backward continued fraction m(z, S^j omega) = 1 / (-z + b_1 - a_1^2 m(z, S^{j+1} omega))
/// at z = x + i epsilon, seeded at S^{depth+1} omega with the free-field fixed point.
/// Entry j is the boundary record at shift omega_shift + j, j = 0..depth.
std::vector<MBoundary> m_boundary(const ErgodicModel& model, std::int64_t omega_shift, double x,
                                  double epsilon, std::size_t depth);

/// Steps needed so that every shift 0..span has forgotten its seed.
std::size_t boundary_depth(std::size_t span, double epsilon, double depth_factor = 20.0);

struct BoundaryOptions {
  double epsilon = 1e-4;     // smallest imaginary part used
  std::size_t levels = 5;    // epsilon * ratio^k, k = 0..levels-1
  double ratio = 2.0;
  double depth_factor = 20.0;
  double agreement = 0.01;   // max relative gap between extrapolated and raw values
};

// m(x + i0, S^j omega), j = 0..span, approximated by polynomial extrapolation
// in epsilon to epsilon = 0; falls back to the raw smallest-epsilon orbit
// when the extrapolation moves any value by more than `agreement` or leaves
// the upper half plane.
struct BoundaryOrbit {
  double x = 0.0;
  double epsilon = 0.0;
  std::vector<cplx> m;
  bool extrapolated = false;
  double max_relative_change = 0.0;
  // max relative gap between the full extrapolation and the one that drops the
  // coarsest level; only meaningful when extrapolated, otherwise infinity
  double error_estimate = std::numeric_limits<double>::infinity();

  MBoundary at(std::size_t j) const { return make_boundary(x, extrapolated ? 0.0 : epsilon, m.at(j)); }
};

BoundaryOrbit boundary_orbit(const ErgodicModel& model, std::int64_t omega_shift, double x,
                             std::size_t span, const BoundaryOptions& options = {});

// Deift-Simon solution u^+ at real x, normalized by
//   u_0 = 1 / (a_0 sqrt(Im m)),  u_1 = -m / sqrt(Im m),
// and propagated by a_k u_{k+1} = (x - b_k) u_k - a_{k-1} u_{k-1}.
// u^- is the complex conjugate and is not stored.
struct DeiftSimonWave {
  double x = 0.0;
  double epsilon = 0.0;
  bool extrapolated = false;
  std::vector<cplx> u;    // u_0..u_{n+1}
  std::vector<double> s;  // s_0 = 0, s_k = sum_{j<k} phi(S^j omega), k = 0..n+1
  std::vector<double> a;  // a_0..a_{n+1} of omega
  std::vector<cplx> m;    // boundary values at shifts 0..n+1

  std::size_t length() const noexcept { return u.empty() ? 0 : u.size() - 2; }
};

DeiftSimonWave deift_simon_wave(const ErgodicModel& model, std::int64_t omega_shift, double x,
                                double epsilon, std::size_t n);
DeiftSimonWave deift_simon_wave(const ErgodicModel& model, std::int64_t omega_shift, double x,
                                std::size_t n, const BoundaryOptions& options);

/// max_k |a_k (u_{k+1} conj(u_k) - conj(u_{k+1}) u_k) + 2i|, k = 0..n.
double wronskian_defect(const DeiftSimonWave& wave);

/// max_k |u_k e^{i s_k} - u_0(S^k omega)| / |u_0(S^k omega)|, with the right side
/// taken from the boundary orbit alone.
double phase_factorization_defect(const DeiftSimonWave& wave);

/// p_j = Im u_{j+1} / Im u_1, j = 0..n.
std::vector<double> recover_p_from_u(const DeiftSimonWave& wave, std::size_t n);

/// max_j |p_j(recovered) - p_j| / max(|p_j|, rms p) over j = 0..n, with p_j
/// from the three-term recurrence of the realized parameters.
double p_recovery_error(const DeiftSimonWave& wave, const ErgodicModel& model, std::int64_t omega_shift,
                        std::size_t n);

struct CesaroAverages {
  std::size_t n = 0;
  double avg_p2 = 0.0;     // (1/(n+1)) sum_{j<=n} p_j^2
  double avg_q2 = 0.0;     // (1/(n+1)) sum_{j<=n} q_j^2
  double avg_im_u2 = 0.0;  // (1/n) sum_{j=1}^n (Im u_j)^2
  cplx avg_u2;             // (1/n) sum_{j=1}^n u_j^2; real part R, imaginary part I
  double rho_L = 0.0;      // avg_im_u2 / pi
  double w = 0.0;          // Im m(x + i0, omega) / pi
  double nu_below = 0.0;   // fraction of zeros of p_n below x
  bool extrapolated = false;

  double R() const { return avg_u2.real(); }
  double I() const { return avg_u2.imag(); }
};

CesaroAverages cesaro_averages(const ErgodicModel& model, std::int64_t omega_shift, double x,
                               double epsilon, std::size_t n);

}  // namespace jlab
