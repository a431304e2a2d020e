// landauer: command-line front end for erasure sweeps and oracle validation.
//
//   landauer single --theta 0.785 --vz 0.5
//   landauer sweep-initial --theta 1.5708 --grid 21 --out grid.csv --jobs 4
//   landauer sweep-theta --out theta.csv
//   landauer oracle-validate
//
// Flags override values read from --config. Exit status: 0 all points
// converged (or all oracle checks passed), 2 partial, 1 error.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "landauer/experiment.hpp"

namespace {

using landauer::experiment::ExperimentConfig;

struct Overrides {
    std::optional<std::string> config_path;
    std::map<std::string, std::string> values;
};

// Registers one "--flag" that maps onto a config key.
void add_value(CLI::App& app, Overrides& o, const std::string& flag, const std::string& key,
               const std::string& help) {
    app.add_option_function<std::string>(
        flag, [&o, key](const std::string& v) { o.values[key] = v; }, help);
}

void add_common(CLI::App& app, Overrides& o) {
    app.add_option_function<std::string>(
        "--config", [&o](const std::string& v) { o.config_path = v; },
        "key=value file read before the flags");
    add_value(app, o, "--theta", "theta", "tilt angle in [0, pi] (default pi/4)");
    add_value(app, o, "--lambda", "lambda", "Ohmic coupling strength (default 0.01)");
    add_value(app, o, "--omega-c", "omega_c", "cutoff frequency (default 1)");
    add_value(app, o, "--beta", "beta", "inverse temperature (default 1)");
    add_value(app, o, "--grid", "grid", "points per axis of the initial-state grid (default 21)");
    add_value(app, o, "--theta-points", "theta_points", "theta grid size for sweep-theta (default 33)");
    add_value(app, o, "--vx", "vx", "initial v_x for single (default 0)");
    add_value(app, o, "--vy", "vy", "initial v_y for single (default 0)");
    add_value(app, o, "--vz", "vz", "initial v_z for single (default 0)");
    add_value(app, o, "--ode-tol", "ode_tol", "relative/absolute ODE tolerance (default 1e-10)");
    add_value(app, o, "--eps-ss", "eps_ss", "steady-state threshold on |dv/dt| (default 1e-6)");
    add_value(app, o, "--kernel-eps", "kernel_eps",
              "steady-state threshold on |dG/dt| (default 1e-6)");
    add_value(app, o, "--hold-time", "hold_time", "time the thresholds must hold (default 20)");
    add_value(app, o, "--t-max", "t_max", "integration limit (default 5000)");
    add_value(app, o, "--quad-tol", "quad_tol", "quadrature tolerance (default 1e-10)");
    add_value(app, o, "--kernel-method", "kernel_method",
              "series or quadrature evaluation of the bath correlators (default series)");
    add_value(app, o, "--out", "output", "CSV output path, '-' for stdout (default -)");
    add_value(app, o, "--jobs", "jobs", "worker threads, 0 = all cores (default 0)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heat and Landauer bounds for qubit erasure in the tilted spin-boson model"};
    app.require_subcommand(1);

    const std::map<std::string, std::string> modes{
        {"single", "one erasure run"},
        {"sweep-initial", "erasure over the (v_x, v_z) Bloch-disk grid"},
        {"sweep-theta", "erasure over theta for v_init on the z axis"},
        {"oracle-validate", "exact finite-reservoir checks"}};
    std::map<std::string, Overrides> overrides;
    for (const auto& [name, help] : modes) add_common(*app.add_subcommand(name, help), overrides[name]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const auto* sub = app.get_subcommands().front();
        const auto& o = overrides.at(sub->get_name());
        ExperimentConfig config =
            o.config_path ? landauer::experiment::load_config(*o.config_path) : ExperimentConfig{};
        config.mode = landauer::experiment::parse_mode(sub->get_name());
        landauer::experiment::apply(config, o.values);
        return landauer::experiment::run_experiment(config, std::cerr).exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return landauer::experiment::exit_error;
    }
}
