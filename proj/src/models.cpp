#include "jacobi_lab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "jacobi_lab/errors.hpp"

namespace jlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// splitmix64 finalizer; gives random access to the i.i.d. sequence.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::int64_t m) {
  const std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(m)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::int64_t wrap(std::int64_t v, std::int64_t p) {
  const std::int64_t r = v % p;
  return r < 0 ? r + p : r;
}

}  // namespace

ErgodicModel::ErgodicModel(Kind kind, std::int64_t n_min, std::int64_t n_max)
    : kind_(std::move(kind)), n_min_(n_min), n_max_(n_max) {
  if (n_min_ > 0 || n_max_ < 1) {
    throw std::invalid_argument("ErgodicModel: generation range must contain 0 and 1");
  }
  std::visit(overloaded{
                 [](const FreeModel&) {},
                 [](const PeriodicModel& m) {
                   if (m.a.empty() || m.a.size() != m.b.size()) {
                     throw std::invalid_argument("periodic model: tables must be nonempty and equal length");
                   }
                   for (double v : m.a) {
                     if (!(v > 0.0)) throw std::invalid_argument("periodic model: a entries must be positive");
                   }
                 },
                 [](const AlmostMathieuModel& m) {
                   if (!std::isfinite(m.lambda) || !std::isfinite(m.alpha) || !std::isfinite(m.theta)) {
                     throw std::invalid_argument("almost Mathieu model: parameters must be finite");
                   }
                 },
                 [](const AndersonModel& m) {
                   if (!(m.coupling >= 0.0)) throw std::invalid_argument("anderson model: coupling must be >= 0");
                 },
             },
             kind_);
}

ErgodicModel ErgodicModel::periodic(std::vector<double> a, std::vector<double> b, std::int64_t offset) {
  return ErgodicModel(PeriodicModel{std::move(a), std::move(b), offset});
}

ErgodicModel ErgodicModel::almost_mathieu(double lambda, double alpha, double theta) {
  return ErgodicModel(AlmostMathieuModel{lambda, alpha, theta});
}

ErgodicModel ErgodicModel::anderson(double coupling, std::optional<std::uint64_t> seed) {
  return ErgodicModel(AndersonModel{coupling, seed});
}

std::string ErgodicModel::name() const {
  return std::visit(overloaded{
                        [](const FreeModel&) { return std::string("free"); },
                        [](const PeriodicModel&) { return std::string("periodic"); },
                        [](const AlmostMathieuModel&) { return std::string("amo"); },
                        [](const AndersonModel&) { return std::string("anderson"); },
                    },
                    kind_);
}

ErgodicModel::Coefficient ErgodicModel::at(std::int64_t m) const {
  if (m < n_min_ || m > n_max_) {
    throw std::out_of_range("ErgodicModel::at: index " + std::to_string(m) + " outside [" +
                            std::to_string(n_min_) + ", " + std::to_string(n_max_) + "]");
  }
  return std::visit(
      overloaded{
          [](const FreeModel&) { return Coefficient{1.0, 0.0}; },
          [m](const PeriodicModel& p) {
            const auto idx = static_cast<std::size_t>(wrap(m - 1 + p.offset, static_cast<std::int64_t>(p.a.size())));
            return Coefficient{p.a[idx], p.b[idx]};
          },
          [m](const AlmostMathieuModel& p) {
            return Coefficient{1.0, 2.0 * p.lambda *
                                        std::cos(std::numbers::pi * p.alpha * static_cast<double>(m) + p.theta)};
          },
          [m](const AndersonModel& p) {
            if (!p.seed) throw UnsupportedModel("anderson model: a seed is required");
            return Coefficient{1.0, p.coupling * (2.0 * uniform01(*p.seed, m) - 1.0)};
          },
      },
      kind_);
}

bool ErgodicModel::phase_independent() const noexcept {
  return std::holds_alternative<FreeModel>(kind_);
}

double ErgodicModel::alpha_minus() const {
  if (const auto* p = std::get_if<PeriodicModel>(&kind_)) return *std::min_element(p->a.begin(), p->a.end());
  return 1.0;
}

double ErgodicModel::alpha_plus() const {
  if (const auto* p = std::get_if<PeriodicModel>(&kind_)) return *std::max_element(p->a.begin(), p->a.end());
  return 1.0;
}

double ErgodicModel::beta() const {
  return std::visit(overloaded{
                        [](const FreeModel&) { return 0.0; },
                        [](const PeriodicModel& p) {
                          double m = 0.0;
                          for (double v : p.b) m = std::max(m, std::abs(v));
                          return m;
                        },
                        [](const AlmostMathieuModel& p) { return 2.0 * std::abs(p.lambda); },
                        [](const AndersonModel& p) { return p.coupling; },
                    },
                    kind_);
}

JacobiParams realize(const ErgodicModel& model, std::int64_t omega_shift, std::size_t n) {
  const std::int64_t first = omega_shift + 1;
  const std::int64_t last = omega_shift + static_cast<std::int64_t>(n);
  if (n > 0 && (first < model.n_min() || last > model.n_max())) {
    throw std::out_of_range("realize: indices [" + std::to_string(first) + ", " + std::to_string(last) +
                            "] outside the generation range");
  }
  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto c = model.at(first + static_cast<std::int64_t>(j));
    a[j] = c.a;
    b[j] = c.b;
  }
  return JacobiParams(std::move(a), std::move(b));
}

std::vector<double> sample_phases(const ErgodicModel& model, std::size_t count, std::uint64_t seed) {
  if (!std::holds_alternative<AlmostMathieuModel>(model.kind())) {
    throw UnsupportedModel("sample_phases: only rotation (almost Mathieu) models carry a phase");
  }
  if (count == 0) throw std::invalid_argument("sample_phases: count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
  std::vector<double> out(count);
  for (auto& t : out) t = dist(rng);
  return out;
}

std::vector<ErgodicModel> sample_realizations(const ErgodicModel& model, std::size_t count,
                                              std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample_realizations: count must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<ErgodicModel> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::visit(overloaded{
                   [&](const FreeModel&) { out.push_back(model); },
                   [&](const PeriodicModel& p) {
                     std::uniform_int_distribution<std::int64_t> d(0, static_cast<std::int64_t>(p.a.size()) - 1);
                     out.emplace_back(PeriodicModel{p.a, p.b, d(rng)}, model.n_min(), model.n_max());
                   },
                   [&](const AlmostMathieuModel& p) {
                     std::uniform_real_distribution<double> d(0.0, 2.0 * std::numbers::pi);
                     out.emplace_back(AlmostMathieuModel{p.lambda, p.alpha, d(rng)}, model.n_min(), model.n_max());
                   },
                   [&](const AndersonModel& p) {
                     out.emplace_back(AndersonModel{p.coupling, rng()}, model.n_min(), model.n_max());
                   },
               },
               model.kind());
  }
  return out;
}

}  // namespace jlab
