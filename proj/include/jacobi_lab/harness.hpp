#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jacobi_lab/models.hpp"

namespace jlab {

inline constexpr const char* kExperimentKinds[] = {"zeros", "kernel", "universality", "dos",
                                                   "wave", "bounds", "derivative"};

struct ModelSpec {
  std::string kind = "free";  // free | periodic | amo | anderson
  double lambda = 0.5;
  double alpha = 0.6180339887498949;
  double theta = 0.0;
  std::vector<double> a{1.0};  // periodic tables
  std::vector<double> b{0.0};
  double coupling = 1.0;
  std::uint64_t model_seed = 1;  // anderson
};

struct ExperimentConfig {
  std::string experiment = "zeros";
  ModelSpec model;
  std::int64_t omega_shift = 0;
  std::vector<double> energies;
  std::vector<std::int64_t> n;
  std::vector<double> epsilon{1e-4};
  std::size_t phase_samples = 1000;
  std::uint64_t seed = 0;
  std::string out = "out";
  std::size_t threads = 1;

  double window = 30.0;                  // zeros: half-width W = window / n
  std::optional<double> rho_ref;         // zeros, universality
  double offset_limit = 10.0;            // universality grid |a|, |b| <= offset_limit
  double offset_step = 0.5;
  double wiggle_A = 5.0;                 // kernel
  std::vector<double> z_radii{0.0, 1.0, 2.0, 5.0, 10.0};  // bounds
  std::size_t z_angles = 8;
  std::size_t instances = 0;             // bounds: extra seeded random (x0, z) draws
  double exponent_scale = 1.0;           // bounds: 1 is the theorem, < 1 injects a fault
};

/// Parses JSON text. Throws std::invalid_argument with a readable message on
/// malformed input or unknown keys.
ExperimentConfig parse_config(std::string_view json_text);
std::string config_to_json(const ExperimentConfig& config);

struct Diagnostic {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  std::string message;
};

/// Errors are exactly the conditions that make run() exit with status 1 before
/// doing any work; warnings never change the exit status.
std::vector<Diagnostic> validate(const ExperimentConfig& config);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

ErgodicModel build_model(const ModelSpec& spec);

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 config or I/O error, 2 mathematical-contract violation
  std::vector<std::string> files;
  std::vector<Diagnostic> diagnostics;
  std::size_t violations = 0;
  std::string message;
};

RunResult run(const ExperimentConfig& config);

/// Shortest decimal string that round-trips to v ("nan", "inf", "-inf" otherwise).
std::string format_double(double v);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

}  // namespace jlab
