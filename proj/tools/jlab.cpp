// jlab: batch driver for the jacobi_lab experiments.
//
// Precedence: built-in defaults < --config file < command line flags.
// Exit status: 0 success, 1 config or I/O error, 2 mathematical-contract violation.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "jacobi_lab/harness.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
  std::optional<std::string> model;
  std::optional<double> lambda, alpha, theta, eps, coupling;
  std::vector<std::int64_t> n;
  std::vector<double> x0;
  std::optional<std::size_t> phase_samples;
  std::optional<double> exponent_scale;
  bool validate_only = false;
};

int execute(const std::string& kind, const Flags& f) {
  jlab::ExperimentConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) {
      std::cerr << "jlab: cannot read config " << f.config << "\n";
      return 1;
    }
    std::stringstream text;
    text << in.rdbuf();
    try {
      cfg = jlab::parse_config(text.str());
    } catch (const std::exception& e) {
      std::cerr << "jlab: " << f.config << ": " << e.what() << "\n";
      return 1;
    }
  }
  cfg.experiment = kind;
  if (f.seed) cfg.seed = *f.seed;
  if (f.out) cfg.out = *f.out;
  if (f.threads) cfg.threads = *f.threads;
  if (f.model) cfg.model.kind = *f.model;
  if (f.lambda) cfg.model.lambda = *f.lambda;
  if (f.alpha) cfg.model.alpha = *f.alpha;
  if (f.theta) cfg.model.theta = *f.theta;
  if (f.coupling) cfg.model.coupling = *f.coupling;
  if (f.eps) cfg.epsilon = {*f.eps};
  if (!f.n.empty()) cfg.n = f.n;
  if (!f.x0.empty()) cfg.energies = f.x0;
  if (f.phase_samples) cfg.phase_samples = *f.phase_samples;
  if (f.exponent_scale) cfg.exponent_scale = *f.exponent_scale;

  const auto diagnostics = jlab::validate(cfg);
  for (const auto& d : diagnostics) {
    std::cerr << (d.severity == jlab::Diagnostic::Severity::error ? "error: " : "warning: ") << d.message << "\n";
  }
  if (f.validate_only) return jlab::has_errors(diagnostics) ? 1 : 0;

  const auto result = jlab::run(cfg);
  if (!result.message.empty() && result.exit_code != 0) std::cerr << "jlab: " << result.message << "\n";
  for (const auto& file : result.files) std::cout << file << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jlab: orthogonal polynomial and ergodic Jacobi matrix experiments"};
  app.require_subcommand(1);
  Flags flags;

  for (const char* kind : jlab::kExperimentKinds) {
    auto* sub = app.add_subcommand(kind, std::string("run the ") + kind + " experiment");
    sub->add_option("--config", flags.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--threads", flags.threads, "worker threads");
    sub->add_option("--model", flags.model, "free | periodic | amo | anderson");
    sub->add_option("--lambda", flags.lambda, "almost Mathieu coupling");
    sub->add_option("--alpha", flags.alpha, "almost Mathieu frequency");
    sub->add_option("--theta", flags.theta, "almost Mathieu phase");
    sub->add_option("--coupling", flags.coupling, "anderson disorder strength");
    sub->add_option("--n", flags.n, "degree(s)");
    sub->add_option("--x0", flags.x0, "energy or energies");
    sub->add_option("--eps", flags.eps, "imaginary part for boundary values");
    sub->add_option("--phase-samples", flags.phase_samples, "Monte Carlo phase samples (dos)");
    sub->add_option("--exponent-scale", flags.exponent_scale, "bounds: scale of the exponent constant");
    sub->add_flag("--validate", flags.validate_only, "only validate the config");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return execute(app.get_subcommands().front()->get_name(), flags);
}
