#include "landauer/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "landauer/bloch_dynamics.hpp"
#include "landauer/exact_oracle.hpp"

namespace landauer::experiment {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
        throw ConfigError("invalid number for '" + key + "': '" + value + "'");
    }
    return out;
}

int to_int(const std::string& key, const std::string& value) {
    int out = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("invalid integer for '" + key + "': '" + value + "'");
    }
    return out;
}

std::string format_number(double x) {
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return out;
}

// Runs task(i) for i in [0, n) on up to `jobs` threads. The first exception
// is rethrown after all workers stop.
template <class Task>
void parallel_for(std::size_t n, int jobs, Task&& task) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, n));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

int resolved_jobs(int jobs) {
    if (jobs > 0) return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::single: return "single";
        case Mode::sweep_initial: return "sweep-initial";
        case Mode::sweep_theta: return "sweep-theta";
        case Mode::oracle_validate: return "oracle-validate";
    }
    return "?";
}

Mode parse_mode(const std::string& text) {
    for (Mode m : {Mode::single, Mode::sweep_initial, Mode::sweep_theta, Mode::oracle_validate}) {
        if (text == to_string(m)) return m;
    }
    throw ConfigError("unknown mode '" + text +
                      "' (expected single, sweep-initial, sweep-theta or oracle-validate)");
}

void ExperimentConfig::validate() const {
    if (!mode) throw ConfigError("missing required key: mode");
    try {
        bath.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw ConfigError("theta must lie in [0, pi]");
    if (theta_points < 2) throw ConfigError("theta_points must be at least 2");
    if (grid < 2) throw ConfigError("grid must be at least 2");
    if (v_init.norm() > 1.0 + 1e-12) throw ConfigError("initial Bloch vector has |v| > 1");
    if (!(numeric.ode_tol > 0.0)) throw ConfigError("ode_tol must be positive");
    if (!(numeric.eps_ss > 0.0)) throw ConfigError("eps_ss must be positive");
    if (!(numeric.kernel_eps > 0.0)) throw ConfigError("kernel_eps must be positive");
    if (!(numeric.hold_time > 0.0)) throw ConfigError("hold_time must be positive");
    if (!(numeric.t_max > numeric.hold_time)) throw ConfigError("t_max must exceed hold_time");
    if (jobs < 0) throw ConfigError("jobs must be non-negative");
    if (output.empty()) throw ConfigError("output must not be empty");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "mode",   "lambda",   "omega_c",   "beta",     "quad_tol",  "kernel_method",
        "theta",  "theta_points", "grid",  "vx",       "vy",        "vz",
        "ode_tol", "eps_ss",  "kernel_eps", "hold_time", "t_max",   "output", "jobs"};
    return keys;
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    if (key == "mode") c.mode = parse_mode(value);
    else if (key == "lambda") c.bath.lambda = to_double(key, value);
    else if (key == "omega_c") c.bath.omega_c = to_double(key, value);
    else if (key == "beta") c.bath.beta = to_double(key, value);
    else if (key == "quad_tol") c.bath.quad_tol = to_double(key, value);
    else if (key == "kernel_method") {
        if (value == "series") c.kernel_method = bath::OhmicKernels::Method::series;
        else if (value == "quadrature") c.kernel_method = bath::OhmicKernels::Method::quadrature;
        else throw ConfigError("kernel_method must be 'series' or 'quadrature'");
    }
    else if (key == "theta") c.theta = to_double(key, value);
    else if (key == "theta_points") c.theta_points = to_int(key, value);
    else if (key == "grid") c.grid = to_int(key, value);
    else if (key == "vx") c.v_init[0] = to_double(key, value);
    else if (key == "vy") c.v_init[1] = to_double(key, value);
    else if (key == "vz") c.v_init[2] = to_double(key, value);
    else if (key == "ode_tol") c.numeric.ode_tol = to_double(key, value);
    else if (key == "eps_ss") c.numeric.eps_ss = to_double(key, value);
    else if (key == "kernel_eps") c.numeric.kernel_eps = to_double(key, value);
    else if (key == "hold_time") c.numeric.hold_time = to_double(key, value);
    else if (key == "t_max") c.numeric.t_max = to_double(key, value);
    else if (key == "output") c.output = value;
    else if (key == "jobs") c.jobs = to_int(key, value);
    else {
        std::string valid;
        for (const auto& k : config_keys()) valid += (valid.empty() ? "" : ", ") + k;
        throw ConfigError("unknown key '" + key + "'; valid keys: " + valid);
    }
}

void apply(ExperimentConfig& config, const std::map<std::string, std::string>& assignments) {
    for (const auto& [key, value] : assignments) apply(config, key, value);
}

std::map<std::string, std::string> parse_assignments(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(number) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    ExperimentConfig config;
    experiment::apply(config, parse_assignments(in));
    return config;
}

InitialGrid bloch_disk_grid(int n) {
    InitialGrid grid;
    const auto axis = linspace(-1.0, 1.0, n);
    for (double vx : axis) {
        for (double vz : axis) {
            const Eigen::Vector3d v(vx, 0.0, vz);
            (vx * vx + vz * vz <= 1.0 + 1e-12 ? grid.inside : grid.outside).push_back(v);
        }
    }
    return grid;
}

std::vector<double> theta_grid(int n) { return linspace(0.0, std::numbers::pi, n); }

std::vector<double> theta_sweep_vz(int n, double beta) {
    auto vz = linspace(-1.0, 1.0, n);
    for (double extra : {-1.0, 0.0, 1.0, -std::tanh(0.5 * beta)}) vz.push_back(extra);
    std::sort(vz.begin(), vz.end());
    vz.erase(std::unique(vz.begin(), vz.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             vz.end());
    return vz;
}

std::string csv_header() {
    return "theta,vx0,vy0,vz0,t_ss,heat,bound_entropic,bound_thermo,vx_final,vy_final,vz_final,"
           "converged,positivity_ok,jensen_ok,landauer_ok";
}

void write_csv(std::ostream& out, const std::vector<bounds::ErasureResult>& rows) {
    out << csv_header() << '\n';
    for (const auto& r : rows) {
        out << format_number(r.theta) << ',' << format_number(r.v_init[0]) << ','
            << format_number(r.v_init[1]) << ',' << format_number(r.v_init[2]) << ','
            << format_number(r.t_ss) << ',' << format_number(r.heat) << ','
            << format_number(r.bound_entropic) << ',' << format_number(r.bound_thermo) << ','
            << format_number(r.v_final[0]) << ',' << format_number(r.v_final[1]) << ','
            << format_number(r.v_final[2]) << ',' << int(r.flags.converged) << ','
            << int(r.flags.positivity_ok) << ',' << int(r.flags.jensen_ok) << ','
            << int(r.flags.landauer_ok) << '\n';
    }
}

void write_checks(std::ostream& out, const std::vector<OracleCheck>& checks) {
    out << "check,value,tolerance,passed\n";
    for (const auto& c : checks) {
        out << c.name << ',' << format_number(c.value) << ',' << format_number(c.tolerance) << ','
            << int(c.passed) << '\n';
    }
}

std::vector<OracleCheck> oracle_validation(std::ostream& log) {
    using namespace landauer::oracle;
    std::vector<OracleCheck> checks;
    auto record = [&](std::string name, double value, double tolerance) {
        checks.push_back({std::move(name), value, tolerance, value <= tolerance});
        const auto& c = checks.back();
        log << "oracle: " << c.name << " = " << format_number(c.value) << " (tolerance "
            << format_number(c.tolerance) << ") " << (c.passed ? "ok" : "FAILED") << '\n';
    };

    OracleConfig config;
    config.bloch = Eigen::Vector3d(0.3, 0.2, 0.5);
    const OracleSystem system(config);
    const double beta = system.config().beta;

    const std::vector<double> times{0.5, 1.0, 2.0, 3.0, 5.0};
    double residual = 0.0;
    double negative = 0.0;
    for (double t : times) {
        const auto rec = system.landauer_equality(t);
        residual = std::max(residual, std::abs(rec.residual));
        negative = std::max({negative, -rec.mutual_info, -rec.rel_entropy});
    }
    record("landauer_residual", residual, 1e-10);
    record("negative_information_terms", std::max(negative, 0.0), 1e-12);

    const auto theta_beta = system.cgf(beta, times);
    const auto heat = system.heat(times);
    double imag = 0.0;
    double jensen = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        imag = std::max(imag, std::abs(theta_beta[i].imag()));
        jensen = std::max(jensen, -theta_beta[i].real() / beta - heat[i]);
    }
    record("cgf_imaginary_part", imag, 1e-12);
    record("jensen_violation", std::max(jensen, 0.0), 1e-12);

    double equivalence = 0.0;
    for (double theta : {std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 2}) {
        OracleConfig c = config;
        c.theta = theta;
        equivalence = std::max(equivalence,
                               tilted_field_equivalence(c, {0.0, 0.5 * beta, beta}, times));
    }
    record("tilted_field_equivalence", equivalence, 1e-10);

    OracleConfig fine = config;
    fine.n_levels = 8;
    record("kernel_certification",
           certify_kernels(fine, {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}, {0.0, 0.5 * beta, beta}), 1e-8);

    const auto& cfg = system.config();
    const bath::DiscreteModeKernels kernels(cfg.mode_freqs, cfg.couplings, beta);
    dynamics::PropagationOptions options;
    options.t_max = times.back();
    const auto traj = dynamics::propagate_with_heat(cfg.bloch, cfg.theta, kernels, options);
    const double tcl_heat = traj.heat(traj.size() - 1).q().real();
    record("tcl2_short_time_heat_relative", std::abs(tcl_heat - heat.back()) / std::abs(heat.back()),
           0.2);
    return checks;
}

ExperimentOutcome execute(const ExperimentConfig& config, std::ostream& log) {
    config.validate();
    ExperimentOutcome outcome;
    if (*config.mode == Mode::oracle_validate) {
        outcome.checks = oracle_validation(log);
        const bool ok = std::all_of(outcome.checks.begin(), outcome.checks.end(),
                                    [](const OracleCheck& c) { return c.passed; });
        outcome.exit_code = ok ? exit_ok : exit_partial;
        return outcome;
    }

    struct Point {
        double theta;
        Eigen::Vector3d v;
    };
    std::vector<Point> points;
    switch (*config.mode) {
        case Mode::single:
            points.push_back({config.theta, config.v_init});
            break;
        case Mode::sweep_initial: {
            auto grid = bloch_disk_grid(config.grid);
            for (const auto& v : grid.inside) points.push_back({config.theta, v});
            outcome.skipped = std::move(grid.outside);
            for (const auto& v : outcome.skipped) {
                log << "skipped (v_x, v_z) = (" << format_number(v[0]) << ", " << format_number(v[2])
                    << "): outside the Bloch disk\n";
            }
            break;
        }
        case Mode::sweep_theta:
            for (double theta : theta_grid(config.theta_points)) {
                for (double vz : theta_sweep_vz(config.grid, config.bath.beta)) {
                    points.push_back({theta, Eigen::Vector3d(0.0, 0.0, vz)});
                }
            }
            break;
        case Mode::oracle_validate:
            break;
    }

    const bath::OhmicKernels kernels(config.bath, config.kernel_method);
    outcome.rows.resize(points.size());
    parallel_for(points.size(), resolved_jobs(config.jobs), [&](std::size_t i) {
        outcome.rows[i] = bounds::run_erasure(points[i].v, points[i].theta, kernels, config.numeric);
    });

    std::size_t failed = 0;
    for (const auto& r : outcome.rows) {
        if (!r.flags.converged) {
            ++failed;
            log << "not converged by t_max: theta = " << format_number(r.theta) << ", v = ("
                << format_number(r.v_init[0]) << ", " << format_number(r.v_init[1]) << ", "
                << format_number(r.v_init[2]) << ")\n";
        }
    }
    outcome.exit_code = failed == 0 ? exit_ok : exit_partial;
    return outcome;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, std::ostream& log) {
    auto outcome = execute(config, log);
    auto emit = [&](std::ostream& out) {
        if (*config.mode == Mode::oracle_validate) write_checks(out, outcome.checks);
        else write_csv(out, outcome.rows);
    };
    if (config.output == "-") {
        emit(std::cout);
    } else {
        std::ofstream out(config.output);
        if (!out) throw std::runtime_error("cannot open output file '" + config.output + "'");
        emit(out);
        if (!out) throw std::runtime_error("failed writing '" + config.output + "'");
    }
    return outcome;
}

} // namespace landauer::experiment
