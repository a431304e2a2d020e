// experiment.hpp: Erasure sweeps and oracle validation as CSV-producing
// experiments, configured by flat key=value files.

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "landauer/bath_correlation.hpp"
#include "landauer/bounds.hpp"

namespace landauer::experiment {

enum class Mode { single, sweep_initial, sweep_theta, oracle_validate };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    std::optional<Mode> mode;  // required
    bath::BathSpec bath;       // lambda, omega_c, beta, quad_tol
    bath::OhmicKernels::Method kernel_method{bath::OhmicKernels::Method::series};
    double theta{0.785398163397448};  // pi/4
    int theta_points{33};
    int grid{21};
    Eigen::Vector3d v_init{0.0, 0.0, 0.0};  // single mode
    bounds::NumericParams numeric;
    std::string output{"-"};  // "-" is stdout
    int jobs{0};              // 0: hardware concurrency

    void validate() const;
};

// Recognized keys, in documentation order.
const std::vector<std::string>& config_keys();

// Applies "key=value" assignments; later ones win. Throws ConfigError on
// unknown keys (listing the valid ones) and on malformed values.
void apply(ExperimentConfig& config, const std::map<std::string, std::string>& assignments);
void apply(ExperimentConfig& config, const std::string& key, const std::string& value);

// Flat text: one key=value per line, '#' starts a comment, blank lines ignored.
std::map<std::string, std::string> parse_assignments(std::istream& in);
ExperimentConfig load_config(const std::string& path);

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_partial = 2;

struct OracleCheck {
    std::string name;
    double value{0.0};
    double tolerance{0.0};
    bool passed{false};
};

struct ExperimentOutcome {
    std::vector<bounds::ErasureResult> rows;  // grid order
    std::vector<Eigen::Vector3d> skipped;     // outside the Bloch disk
    std::vector<OracleCheck> checks;          // oracle-validate only
    int exit_code{exit_ok};
};

// Grid of (v_x, v_z) initial points, v_x major; points outside the unit disk
// are returned separately.
struct InitialGrid {
    std::vector<Eigen::Vector3d> inside;
    std::vector<Eigen::Vector3d> outside;
};
InitialGrid bloch_disk_grid(int n);

// v_z values of the theta sweep: the uniform grid plus 0, +-1 and -tanh(beta/2).
std::vector<double> theta_sweep_vz(int n, double beta);
std::vector<double> theta_grid(int n);

// Runs every point of the configured experiment (on config.jobs threads) and
// returns the results without writing anything.
ExperimentOutcome execute(const ExperimentConfig& config, std::ostream& log);

// execute() plus CSV output to config.output.
ExperimentOutcome run_experiment(const ExperimentConfig& config, std::ostream& log);

std::string csv_header();
void write_csv(std::ostream& out, const std::vector<bounds::ErasureResult>& rows);
void write_checks(std::ostream& out, const std::vector<OracleCheck>& checks);

std::vector<OracleCheck> oracle_validation(std::ostream& log);

} // namespace landauer::experiment
