#include "jacobi_lab/jacobi_params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "jacobi_lab/errors.hpp"

namespace jlab {

JacobiParams::JacobiParams(std::vector<double> a, std::vector<double> b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != b_.size()) {
    throw std::invalid_argument("JacobiParams: a and b differ in length (" +
                                std::to_string(a_.size()) + " vs " +
                                std::to_string(b_.size()) + ")");
  }
  for (std::size_t j = 0; j < a_.size(); ++j) {
    if (!(a_[j] > 0.0) || !std::isfinite(a_[j])) {
      throw std::invalid_argument("JacobiParams: a_" + std::to_string(j + 1) +
                                  " must be finite and positive");
    }
    if (!std::isfinite(b_[j])) {
      throw std::invalid_argument("JacobiParams: b_" + std::to_string(j + 1) +
                                  " is not finite");
    }
  }
  if (!a_.empty()) {
    auto [lo, hi] = std::minmax_element(a_.begin(), a_.end());
    alpha_minus_ = *lo;
    alpha_plus_ = *hi;
    for (double v : b_) beta_ = std::max(beta_, std::abs(v));
  }
}

JacobiParams JacobiParams::free(std::size_t n) {
  return JacobiParams(std::vector<double>(n, 1.0), std::vector<double>(n, 0.0));
}

double JacobiParams::alpha_minus(std::size_t n) const {
  n = std::min(n, a_.size());
  if (n == 0) return alpha_minus_;
  return *std::min_element(a_.begin(), a_.begin() + static_cast<std::ptrdiff_t>(n));
}

JacobiParams JacobiParams::stripped(std::size_t k) const {
  if (k > a_.size()) {
    throw ParameterExhausted("JacobiParams::stripped: cannot strip " +
                             std::to_string(k) + " of " +
                             std::to_string(a_.size()) + " entries");
  }
  auto off = static_cast<std::ptrdiff_t>(k);
  return JacobiParams(std::vector<double>(a_.begin() + off, a_.end()),
                      std::vector<double>(b_.begin() + off, b_.end()));
}

JacobiParams JacobiParams::prefix(std::size_t n) const {
  if (n > a_.size()) {
    throw ParameterExhausted("JacobiParams::prefix: " + std::to_string(n) +
                             " exceeds " + std::to_string(a_.size()));
  }
  auto end = static_cast<std::ptrdiff_t>(n);
  return JacobiParams(std::vector<double>(a_.begin(), a_.begin() + end),
                      std::vector<double>(b_.begin(), b_.begin() + end));
}

}  // namespace jlab
