#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jacobi_lab/jacobi_params.hpp"

namespace jlab {

struct FreeModel {};

// a_n = a[(n - 1 + offset) mod p], likewise b; offset plays the role of the phase.
struct PeriodicModel {
  std::vector<double> a;
  std::vector<double> b;
  std::int64_t offset = 0;
};

// a_n = 1, b_n = 2 lambda cos(pi alpha n + theta).
struct AlmostMathieuModel {
  double lambda = 0.5;
  double alpha = 0.6180339887498949;  // (sqrt 5 - 1) / 2
  double theta = 0.0;
};

// a_n = 1, b_n i.i.d. uniform on [-coupling, coupling], drawn from (seed, n).
struct AndersonModel {
  double coupling = 1.0;
  std::optional<std::uint64_t> seed;
};

/// Ergodic family a_n(omega) = A(S^{n-1} omega), b_n(omega) = B(S^{n-1} omega),
/// realized for a single omega. Coefficients are available two-sided on
/// [n_min, n_max] so that a_0(omega) = A(S^{-1} omega) exists.
class ErgodicModel {
 public:
  using Kind = std::variant<FreeModel, PeriodicModel, AlmostMathieuModel, AndersonModel>;

  struct Coefficient {
    double a;
    double b;
  };

  explicit ErgodicModel(Kind kind, std::int64_t n_min = -(std::int64_t{1} << 40),
                        std::int64_t n_max = std::int64_t{1} << 40);

  static ErgodicModel free() { return ErgodicModel(FreeModel{}); }
  static ErgodicModel periodic(std::vector<double> a, std::vector<double> b, std::int64_t offset = 0);
  static ErgodicModel almost_mathieu(double lambda, double alpha, double theta);
  static ErgodicModel anderson(double coupling, std::optional<std::uint64_t> seed);

  const Kind& kind() const noexcept { return kind_; }
  std::string name() const;
  std::int64_t n_min() const noexcept { return n_min_; }
  std::int64_t n_max() const noexcept { return n_max_; }

  /// (a_m, b_m) of this omega, any m in [n_min, n_max].
  Coefficient at(std::int64_t m) const;

  /// True when every shift gives the same coefficients (the free model).
  bool phase_independent() const noexcept;

  /// Bounds alpha_-, alpha_+, beta over the whole family.
  double alpha_minus() const;
  double alpha_plus() const;
  double beta() const;

 private:
  Kind kind_;
  std::int64_t n_min_;
  std::int64_t n_max_;
};

/// Parameter prefix {a_j, b_j}_{j=1..n} of J_{S^k omega}: a_j = a_{k+j}(omega).
/// Throws UnsupportedModel for an Anderson model without a seed and
/// std::out_of_range outside the generation range.
JacobiParams realize(const ErgodicModel& model, std::int64_t omega_shift, std::size_t n);

/// i.i.d. uniform phases in [0, 2 pi) for the almost Mathieu family.
std::vector<double> sample_phases(const ErgodicModel& model, std::size_t count, std::uint64_t seed);

/// Independent draws omega ~ eta: fresh theta (almost Mathieu), fresh offset
/// (periodic), fresh seed (Anderson); the free model is returned as is.
std::vector<ErgodicModel> sample_realizations(const ErgodicModel& model, std::size_t count,
                                              std::uint64_t seed);

}  // namespace jlab
