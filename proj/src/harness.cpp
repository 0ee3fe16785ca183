#include "jacobi_lab/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "jacobi_lab/boundary.hpp"
#include "jacobi_lab/bounds.hpp"
#include "jacobi_lab/dos.hpp"
#include "jacobi_lab/errors.hpp"
#include "jacobi_lab/kernel.hpp"
#include "jacobi_lab/zeros.hpp"

namespace jlab {

using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------- config ---

const std::set<std::string> kTopKeys = {
    "experiment", "model",   "omega_shift",  "energies",    "n",          "epsilon",
    "phase_samples", "seed", "out",          "threads",     "window",     "rho_ref",
    "offset_limit", "offset_step", "wiggle_A", "z_radii",   "z_angles",   "instances",
    "exponent_scale"};
const std::set<std::string> kModelKeys = {"kind", "lambda", "alpha", "theta", "a", "b", "coupling", "seed"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw std::invalid_argument("unknown key '" + key + "' in " + where);
  }
}

template <class T>
std::vector<T> as_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

std::vector<double> parse_energies(const json& v) {
  if (v.is_object()) {
    reject_unknown(v, {"start", "stop", "count"}, "energies");
    const double start = v.at("start").get<double>();
    const double stop = v.at("stop").get<double>();
    const auto count = v.at("count").get<std::size_t>();
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(count == 1 ? start
                               : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
  }
  return as_list<double>(v);
}

// ------------------------------------------------------------ formatting ---

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string out;
    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

std::string cell(double v) { return format_double(v); }
std::string cell(std::int64_t v) { return std::to_string(v); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }
std::string cell(const char* v) { return v; }

template <class... Ts>
std::vector<std::string> row(const Ts&... values) {
  return {cell(values)...};
}

// ---------------------------------------------------------- parallel map ---

// Runs f(i) for i in [0, count) on up to `threads` workers. Results are stored
// by index, so output order never depends on scheduling; the exception of the
// lowest failing index is rethrown.
template <class R>
std::vector<R> parallel_map(std::size_t count, std::size_t threads, const std::function<R(std::size_t)>& f) {
  std::vector<R> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t k = std::max<std::size_t>(1, std::min(threads, count));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

struct Task {
  std::size_t n;
  double x;
};

std::vector<Task> grid_tasks(const ExperimentConfig& cfg) {
  std::vector<Task> tasks;
  for (auto n : cfg.n) {
    for (double x : cfg.energies) tasks.push_back({static_cast<std::size_t>(n), x});
  }
  return tasks;
}

using Rows = std::vector<std::vector<std::string>>;

void append(Table& table, std::vector<Rows>&& parts) {
  for (auto& part : parts) {
    for (auto& r : part) table.rows.push_back(std::move(r));
  }
}

// --------------------------------------------------------- experiments ---

struct Output {
  std::vector<std::pair<std::string, Table>> files;
  std::size_t violations = 0;
};

double reference_density(const ExperimentConfig& cfg, const ErgodicModel& model, double x0, std::size_t n) {
  if (cfg.rho_ref) return *cfg.rho_ref;
  if (model.name() == "free" && std::abs(x0) < 2.0) return equilibrium_density(-2.0, 2.0, x0);
  const double g[1] = {x0};
  return dos_counting(model, cfg.omega_shift, n, g).rho[0];
}

Output run_zeros(const ExperimentConfig& cfg, const ErgodicModel& model) {
  Table t{{"n", "x0", "j", "x_j", "spacing_ratio", "n_spacing_rho"}, {}};
  const auto tasks = grid_tasks(cfg);
  append(t, parallel_map<Rows>(tasks.size(), cfg.threads, [&](std::size_t i) {
    const auto [n, x0] = tasks[i];
    const auto params = realize(model, cfg.omega_shift, n);
    const auto win = zeros_in_window(params, n, x0, cfg.window / static_cast<double>(n));
    const double rho = reference_density(cfg, model, x0, n);
    const auto x_0 = win.at(0);
    const auto x_1 = win.at(1);
    const double base = x_0 && x_1 ? *x_1 - *x_0 : std::nan("");
    Rows rows;
    for (long j = win.min_j(); j < win.max_j(); ++j) {
      const double gap = *win.at(j + 1) - *win.at(j);
      rows.push_back(row(n, x0, j, *win.at(j), gap / base, static_cast<double>(n) * gap * rho));
    }
    return rows;
  }));
  return {{{"zeros.csv", std::move(t)}}, 0};
}

Output run_kernel(const ExperimentConfig& cfg, const ErgodicModel& model) {
  Table t{{"n", "x", "K_nn", "christoffel_avg", "w", "w_christoffel_avg", "wiggle"}, {}};
  const auto tasks = grid_tasks(cfg);
  BoundaryOptions options;
  options.epsilon = cfg.epsilon.front();
  append(t, parallel_map<Rows>(tasks.size(), cfg.threads, [&](std::size_t i) {
    const auto [n, x] = tasks[i];
    const auto params = realize(model, cfg.omega_shift, n + 1);
    const double K = kernel(params, x, x, n, false);
    const double avg = K / static_cast<double>(n + 1);
    const double w = boundary_orbit(model, cfg.omega_shift, x, 0, options).m[0].imag() / std::numbers::pi;
    return Rows{row(n, x, K, avg, w, w * avg, wiggle_deviation(params, x, n, cfg.wiggle_A))};
  }));
  return {{{"kernel.csv", std::move(t)}}, 0};
}

Output run_universality(const ExperimentConfig& cfg, const ErgodicModel& model) {
  Table t{{"n", "x0", "a", "b", "ratio", "sinc_ref", "abs_err"}, {}};
  const auto tasks = grid_tasks(cfg);
  const auto offsets = symmetric_offsets(cfg.offset_limit, cfg.offset_step);
  append(t, parallel_map<Rows>(tasks.size(), cfg.threads, [&](std::size_t i) {
    const auto [n, x0] = tasks[i];
    const auto params = realize(model, cfg.omega_shift, n + 1);
    const double rho = reference_density(cfg, model, x0, n);
    const auto grid = scaled_grid(params, x0, n, offsets, ScalingMode::plain);
    Rows rows;
    for (std::size_t r = 0; r < offsets.size(); ++r) {
      for (std::size_t c = 0; c < offsets.size(); ++c) {
        const double ref = sinc_reference(rho, offsets[c] - offsets[r]);
        rows.push_back(row(n, x0, offsets[r], offsets[c], grid.at(r, c), ref, std::abs(grid.at(r, c) - ref)));
      }
    }
    return rows;
  }));
  return {{{"universality.csv", std::move(t)}}, 0};
}

Output run_dos(const ExperimentConfig& cfg, const ErgodicModel& model) {
  auto energies = cfg.energies;
  std::sort(energies.begin(), energies.end());
  const double eps = cfg.epsilon.front();

  const auto kotani = parallel_map<KotaniEstimate>(energies.size(), cfg.threads, [&](std::size_t i) {
    return dos_kotani(model, energies[i], eps, cfg.phase_samples, cfg.seed + i);
  });
  const auto counting = parallel_map<DOSEstimate>(cfg.n.size(), cfg.threads, [&](std::size_t i) {
    return dos_counting(model, cfg.omega_shift, static_cast<std::size_t>(cfg.n[i]), energies);
  });

  Table t{{"n", "E", "nu_cdf", "rho_counting", "rho_kotani", "kotani_std_error", "rho_equilibrium"}, {}};
  Table g{{"n", "lo", "hi", "nu"}, {}};
  for (const auto& est : counting) {
    for (std::size_t k = 0; k < energies.size(); ++k) {
      const double E = energies[k];
      const double eq = model.name() == "free" && std::abs(E) < 2.0 ? equilibrium_density(-2.0, 2.0, E) : std::nan("");
      t.rows.push_back(row(est.n, E, est.nu_cdf[k], est.rho[k], kotani[k].rho, kotani[k].std_error, eq));
    }
    for (const auto& gap : detect_gaps(est)) g.rows.push_back(row(est.n, gap.lo, gap.hi, gap.nu));
  }
  return {{{"dos.csv", std::move(t)}, {"dos_gaps.csv", std::move(g)}}, 0};
}

Output run_wave(const ExperimentConfig& cfg, const ErgodicModel& model) {
  Table t{{"n", "x", "extrapolated", "im_m", "wronskian_defect", "phase_defect", "p_recovery_error", "avg_p2",
           "avg_q2", "avg_im_u2", "rho_L", "w_avg_p2", "R", "I", "nu_below"},
          {}};
  const auto tasks = grid_tasks(cfg);
  const double eps = cfg.epsilon.front();
  append(t, parallel_map<Rows>(tasks.size(), cfg.threads, [&](std::size_t i) {
    const auto [n, x] = tasks[i];
    const auto wave = deift_simon_wave(model, cfg.omega_shift, x, eps, n);
    const auto avg = cesaro_averages(model, cfg.omega_shift, x, eps, n);
    return Rows{row(n, x, wave.extrapolated, wave.m[0].imag(), wronskian_defect(wave),
                    phase_factorization_defect(wave), p_recovery_error(wave, model, cfg.omega_shift, n), avg.avg_p2,
                    avg.avg_q2, avg.avg_im_u2, avg.rho_L, avg.w * avg.avg_p2, avg.R(), avg.I(), avg.nu_below)};
  }));
  return {{{"wave.csv", std::move(t)}}, 0};
}

Output run_bounds(const ExperimentConfig& cfg, const ErgodicModel& model) {
  struct Case {
    std::size_t n;
    double x0;
    std::complex<double> z;
  };
  std::vector<Case> cases;
  for (const auto& task : grid_tasks(cfg)) {
    for (double r : cfg.z_radii) {
      const std::size_t angles = r == 0.0 ? 1 : cfg.z_angles;
      for (std::size_t k = 0; k < angles; ++k) {
        cases.push_back({task.n, task.x,
                         std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(angles))});
      }
    }
  }
  if (cfg.instances > 0) {
    std::mt19937_64 rng(cfg.seed);
    const double R = *std::max_element(cfg.z_radii.begin(), cfg.z_radii.end());
    const double span = model.beta() + 2.0 * model.alpha_plus();
    std::uniform_real_distribution<double> ux(-span, span);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> un(0, cfg.n.size() - 1);
    for (std::size_t i = 0; i < cfg.instances; ++i) {
      const auto n = static_cast<std::size_t>(cfg.n[un(rng)]);
      const double x0 = ux(rng);
      const double r = R * std::sqrt(u01(rng));
      cases.push_back({n, x0, std::polar(r, 2.0 * std::numbers::pi * u01(rng))});
    }
  }

  BoundOptions options;
  options.exponent_scale = cfg.exponent_scale;
  Table t{{"n", "x0", "z_re", "z_im", "bound", "lhs", "rhs", "log_lhs", "log_rhs", "C", "holds"}, {}};
  const auto parts = parallel_map<Rows>(cases.size(), cfg.threads, [&](std::size_t i) {
    const auto& c = cases[i];
    const auto params = realize(model, cfg.omega_shift, c.n);
    const auto ces = check_cesaro_bound(params, c.x0, c.z, c.n, options);
    const auto sup = check_sup_bound(params, c.x0, c.z, c.n, options);
    return Rows{row(c.n, c.x0, c.z.real(), c.z.imag(), "cesaro", ces.lhs, ces.rhs, ces.log_lhs, ces.log_rhs,
                    ces.constant_C, ces.holds),
                row(c.n, c.x0, c.z.real(), c.z.imag(), "sup", sup.lhs, sup.rhs, sup.log_lhs, sup.log_rhs,
                    sup.constant_C, sup.holds)};
  });
  std::size_t violations = 0;
  for (const auto& part : parts) {
    for (const auto& r : part) violations += r.back() == "0";
  }
  append(t, std::vector<Rows>(parts));

  Table tel{{"n", "x0", "z_re", "z_im", "telescoping_defect"}, {}};
  const auto tasks = grid_tasks(cfg);
  const double R = *std::max_element(cfg.z_radii.begin(), cfg.z_radii.end());
  const auto z = std::polar(R, std::numbers::pi / 4.0);
  append(tel, parallel_map<Rows>(tasks.size(), cfg.threads, [&](std::size_t i) {
    const auto params = realize(model, cfg.omega_shift, tasks[i].n);
    return Rows{row(tasks[i].n, tasks[i].x, z.real(), z.imag(), telescoping_defect(params, tasks[i].x, z, tasks[i].n))};
  }));
  return {{{"bounds.csv", std::move(t)}, {"bounds_telescoping.csv", std::move(tel)}}, violations};
}

Output run_derivative(const ExperimentConfig& cfg, const ErgodicModel& model) {
  Table t{{"n", "x0", "dp_identity", "dp_fd", "dp_rel_err", "diag_derivative", "diag_fd", "diag_rel_err"}, {}};
  const auto tasks = grid_tasks(cfg);
  append(t, parallel_map<Rows>(tasks.size(), cfg.threads, [&](std::size_t i) {
    const auto [n, x0] = tasks[i];
    const auto params = realize(model, cfg.omega_shift, n);
    const double dp = derivative_via_identity(params, x0, n);
    const double dp_fd = derivative_finite_difference(params, x0, n);
    const double dd = diagonal_derivative(params, x0, n);
    const double dd_fd = diagonal_derivative_fd(params, x0, n);
    const double scale = kernel(params, x0, x0, n, false) / static_cast<double>(n);
    return Rows{row(n, x0, dp, dp_fd, derivative_identity_check(params, x0, n), dd, dd_fd,
                    std::abs(dd - dd_fd) / std::max(std::abs(dd_fd), scale))};
  }));
  return {{{"derivative.csv", std::move(t)}}, 0};
}

bool known_kind(const std::string& kind) {
  return std::find_if(std::begin(kExperimentKinds), std::end(kExperimentKinds),
                      [&](const char* k) { return kind == k; }) != std::end(kExperimentKinds);
}

json model_json(const ModelSpec& m) {
  return {{"kind", m.kind}, {"lambda", m.lambda}, {"alpha", m.alpha},    {"theta", m.theta},
          {"a", m.a},       {"b", m.b},           {"coupling", m.coupling}, {"seed", m.model_seed}};
}

json config_json(const ExperimentConfig& c) {
  json j = {{"experiment", c.experiment},
            {"model", model_json(c.model)},
            {"omega_shift", c.omega_shift},
            {"energies", c.energies},
            {"n", c.n},
            {"epsilon", c.epsilon},
            {"phase_samples", c.phase_samples},
            {"seed", c.seed},
            {"out", c.out},
            {"threads", c.threads},
            {"window", c.window},
            {"offset_limit", c.offset_limit},
            {"offset_step", c.offset_step},
            {"wiggle_A", c.wiggle_A},
            {"z_radii", c.z_radii},
            {"z_angles", c.z_angles},
            {"instances", c.instances},
            {"exponent_scale", c.exponent_scale}};
  j["rho_ref"] = c.rho_ref ? json(*c.rho_ref) : json(nullptr);
  return j;
}

}  // namespace

// ------------------------------------------------------------------ API ---

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  reject_unknown(j, kTopKeys, "config");

  ExperimentConfig c;
  try {
    if (j.contains("experiment")) c.experiment = j["experiment"].get<std::string>();
    if (j.contains("model")) {
      const auto& m = j["model"];
      if (m.is_string()) {
        c.model.kind = m.get<std::string>();
      } else {
        reject_unknown(m, kModelKeys, "model");
        if (m.contains("kind")) c.model.kind = m["kind"].get<std::string>();
        if (m.contains("lambda")) c.model.lambda = m["lambda"].get<double>();
        if (m.contains("alpha")) c.model.alpha = m["alpha"].get<double>();
        if (m.contains("theta")) c.model.theta = m["theta"].get<double>();
        if (m.contains("a")) c.model.a = as_list<double>(m["a"]);
        if (m.contains("b")) c.model.b = as_list<double>(m["b"]);
        if (m.contains("coupling")) c.model.coupling = m["coupling"].get<double>();
        if (m.contains("seed")) c.model.model_seed = m["seed"].get<std::uint64_t>();
      }
    }
    if (j.contains("omega_shift")) c.omega_shift = j["omega_shift"].get<std::int64_t>();
    if (j.contains("energies")) c.energies = parse_energies(j["energies"]);
    if (j.contains("n")) c.n = as_list<std::int64_t>(j["n"]);
    if (j.contains("epsilon")) c.epsilon = as_list<double>(j["epsilon"]);
    if (j.contains("phase_samples")) c.phase_samples = j["phase_samples"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<std::size_t>();
    if (j.contains("window")) c.window = j["window"].get<double>();
    if (j.contains("rho_ref") && !j["rho_ref"].is_null()) c.rho_ref = j["rho_ref"].get<double>();
    if (j.contains("offset_limit")) c.offset_limit = j["offset_limit"].get<double>();
    if (j.contains("offset_step")) c.offset_step = j["offset_step"].get<double>();
    if (j.contains("wiggle_A")) c.wiggle_A = j["wiggle_A"].get<double>();
    if (j.contains("z_radii")) c.z_radii = as_list<double>(j["z_radii"]);
    if (j.contains("z_angles")) c.z_angles = j["z_angles"].get<std::size_t>();
    if (j.contains("instances")) c.instances = j["instances"].get<std::size_t>();
    if (j.contains("exponent_scale")) c.exponent_scale = j["exponent_scale"].get<double>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

std::vector<Diagnostic> validate(const ExperimentConfig& c) {
  std::vector<Diagnostic> out;
  const auto error = [&](std::string msg) { out.push_back({Diagnostic::Severity::error, std::move(msg)}); };
  const auto warn = [&](std::string msg) { out.push_back({Diagnostic::Severity::warning, std::move(msg)}); };

  if (!known_kind(c.experiment)) error("unknown experiment kind '" + c.experiment + "'");
  const auto& m = c.model;
  if (m.kind == "amo") {
    if (!std::isfinite(m.lambda) || !std::isfinite(m.alpha) || !std::isfinite(m.theta)) {
      error("amo parameters must be finite");
    }
  } else if (m.kind == "periodic") {
    if (m.a.empty() || m.a.size() != m.b.size()) error("periodic model needs equal-length nonempty a and b tables");
    for (double v : m.a) {
      if (!(v > 0.0)) error("periodic a entries must be positive");
    }
  } else if (m.kind == "anderson") {
    if (!(m.coupling >= 0.0)) error("anderson coupling must be >= 0");
  } else if (m.kind != "free") {
    error("unsupported model '" + m.kind + "' (expected free, periodic, amo or anderson)");
  }

  if (c.energies.empty()) error("energy list is empty");
  for (double e : c.energies) {
    if (!std::isfinite(e)) error("energies must be finite");
  }
  if (c.n.empty()) error("degree list n is empty");
  for (auto n : c.n) {
    if (n < 1) error("n must be >= 1 (got " + std::to_string(n) + ")");
  }
  if (c.epsilon.empty()) error("epsilon schedule is empty");
  for (double e : c.epsilon) {
    if (!(e > 0.0)) error("epsilon must be positive");
  }
  if (c.threads < 1) error("threads must be >= 1");
  if (c.out.empty()) error("output path is empty");
  if (c.experiment == "dos" && c.phase_samples < 1) error("phase_samples must be >= 1");
  if (c.experiment == "zeros" && !(c.window > 0.0)) error("window must be positive");
  if (c.experiment == "universality" && (!(c.offset_step > 0.0) || !(c.offset_limit >= 0.0))) {
    error("offset grid needs offset_step > 0 and offset_limit >= 0");
  }
  if (c.experiment == "kernel" && !(c.wiggle_A >= 0.0)) error("wiggle_A must be >= 0");
  if (c.experiment == "bounds") {
    if (c.z_radii.empty()) error("z_radii is empty");
    for (double r : c.z_radii) {
      if (!(r >= 0.0)) error("z_radii entries must be >= 0");
    }
    if (c.z_angles < 1) error("z_angles must be >= 1");
  }
  if (c.rho_ref && !(*c.rho_ref > 0.0)) error("rho_ref must be positive");

  const bool wants_ac = c.experiment == "universality" || c.experiment == "wave" || c.experiment == "kernel";
  if (wants_ac && m.kind == "amo" && std::abs(m.lambda) >= 1.0) warn("no a.c. spectrum expected for |λ| ≥ 1");
  if (wants_ac && m.kind == "anderson" && m.coupling > 0.0) warn("no a.c. spectrum expected for the anderson model");
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::error; });
}

ErgodicModel build_model(const ModelSpec& s) {
  if (s.kind == "free") return ErgodicModel::free();
  if (s.kind == "periodic") return ErgodicModel::periodic(s.a, s.b);
  if (s.kind == "amo") return ErgodicModel::almost_mathieu(s.lambda, s.alpha, s.theta);
  if (s.kind == "anderson") return ErgodicModel::anderson(s.coupling, s.model_seed);
  throw UnsupportedModel("unsupported model '" + s.kind + "'");
}

RunResult run(const ExperimentConfig& cfg) {
  RunResult result;
  result.diagnostics = validate(cfg);
  if (has_errors(result.diagnostics)) {
    result.exit_code = 1;
    result.message = "invalid config";
    return result;
  }

  namespace fs = std::filesystem;
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    result.exit_code = 1;
    result.message = "cannot create output directory " + cfg.out;
    return result;
  }

  const auto start = std::chrono::steady_clock::now();
  Output output;
  try {
    const auto model = build_model(cfg.model);
    static const std::map<std::string, Output (*)(const ExperimentConfig&, const ErgodicModel&)> dispatch = {
        {"zeros", run_zeros}, {"kernel", run_kernel}, {"universality", run_universality}, {"dos", run_dos},
        {"wave", run_wave},   {"bounds", run_bounds}, {"derivative", run_derivative}};
    output = dispatch.at(cfg.experiment)(cfg, model);
  } catch (const HerglotzViolation& e) {
    result.exit_code = 2;
    result.message = e.what();
    return result;
  } catch (const CdFormulaMismatch& e) {
    result.exit_code = 2;
    result.message = e.what();
    return result;
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.message = e.what();
    return result;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json files = json::array();
  for (const auto& [name, table] : output.files) {
    const std::string bytes = table.csv();
    std::ofstream f(dir / name, std::ios::binary);
    f << bytes;
    if (!f) {
      result.exit_code = 1;
      result.message = "cannot write " + (dir / name).string();
      return result;
    }
    result.files.push_back((dir / name).string());
    files.push_back({{"path", name}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}, {"rows", table.rows.size()}});
  }

  result.violations = output.violations;
  result.exit_code = output.violations > 0 ? 2 : 0;
  if (output.violations > 0) result.message = std::to_string(output.violations) + " bound violation(s)";

  json diags = json::array();
  for (const auto& d : result.diagnostics) {
    diags.push_back({{"severity", d.severity == Diagnostic::Severity::error ? "error" : "warning"},
                     {"message", d.message}});
  }
  const json manifest = {{"tool", "jlab"},
                         {"version", kVersion},
                         {"compiler", __VERSION__},
                         {"config", config_json(cfg)},
                         {"wall_time_seconds", wall},
                         {"exit_code", result.exit_code},
                         {"violations", output.violations},
                         {"diagnostics", diags},
                         {"files", files}};
  std::ofstream mf(dir / "manifest.json", std::ios::binary);
  mf << manifest.dump(2) << '\n';
  if (!mf) {
    result.exit_code = 1;
    result.message = "cannot write manifest";
    return result;
  }
  result.files.push_back((dir / "manifest.json").string());
  return result;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string plain(buf, res.ptr);
  // fixed notation prints every digit of a large integer
  std::string digits;
  for (char c : plain) {
    if (c >= '0' && c <= '9') digits += c;
  }
  const auto first = digits.find_first_not_of('0');
  if (first == std::string::npos || digits.find_last_not_of('0') - first < 17) return plain;
  const auto sci = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  return std::string(buf, sci.ptr);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

}  // namespace jlab
