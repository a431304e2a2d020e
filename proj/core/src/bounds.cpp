#include "landauer/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "landauer/bloch_dynamics.hpp"

namespace landauer::bounds {

namespace {

constexpr double kNormSlack = 1e-12;
constexpr double kInequalitySlack = 1e-9;
constexpr double kPositivitySlack = 1e-6;

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

} // namespace

double entropy_from_bloch(const Eigen::Vector3d& v) {
    double r = v.norm();
    if (r > 1.0 + kNormSlack) throw std::domain_error("entropy_from_bloch: |v| > 1");
    r = std::min(r, 1.0);
    return -xlogx(0.5 * (1.0 + r)) - xlogx(0.5 * (1.0 - r));
}

double entropic_bound(const Eigen::Vector3d& v_init, const Eigen::Vector3d& v_final, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("entropic_bound: beta must be positive");
    return (entropy_from_bloch(v_init) - entropy_from_bloch(v_final)) / beta;
}

double thermodynamic_bound(double v0_beta_final, double beta) {
    if (!(v0_beta_final > 0.0)) {
        throw std::domain_error("thermodynamic_bound: non-positive chi = beta trace");
    }
    if (!(beta > 0.0)) throw std::invalid_argument("thermodynamic_bound: beta must be positive");
    return -std::log(v0_beta_final) / beta;
}

ErasureResult run_erasure(const Eigen::Vector3d& v_init, double theta,
                          const bath::KernelModel& kernels, const NumericParams& params) {
    using namespace landauer::dynamics;
    const double beta = kernels.beta();

    PropagationOptions options;
    options.t_max = params.t_max;
    options.ode_tol = params.ode_tol;
    options.stop_at_steady_state = SteadyStateCriterion{params.eps_ss, params.hold_time, params.kernel_eps};
    const auto traj = propagate_with_heat(v_init, theta, kernels, options);

    ErasureResult out;
    out.theta = theta;
    out.v_init = v_init;

    const auto ss = find_steady_state(traj, *options.stop_at_steady_state);
    out.flags.converged = ss.converged;
    const std::size_t at = ss.converged ? ss.index : traj.size() - 1;
    out.t_ss = traj.t[at];
    out.heat = traj.heat(at).q().real();
    out.v_final = traj.state(at).bloch();

    for (std::size_t i = 0; i <= at; ++i) {
        const auto b = traj.state(i).bloch();
        out.max_bloch_norm = std::max(out.max_bloch_norm, b.norm());
    }
    out.flags.positivity_ok = out.max_bloch_norm <= 1.0 + kPositivitySlack;

    if (out.t_ss > 0.0) {
        PropagationOptions beta_options;
        beta_options.t_max = out.t_ss;
        beta_options.ode_tol = params.ode_tol;
        const auto counted = propagate(CountingBlochState::from_bloch(v_init, beta), theta, kernels,
                                       beta_options);
        out.v0_beta = counted.v.back()[3].real();
    } else {
        out.v0_beta = 1.0;
    }

    out.bound_thermo = out.v0_beta > 0.0 ? thermodynamic_bound(out.v0_beta, beta)
                                         : std::numeric_limits<double>::quiet_NaN();
    if (out.v_final.norm() <= 1.0 + kNormSlack) {
        out.bound_entropic = entropic_bound(v_init, out.v_final, beta);
    } else {
        out.bound_entropic = std::numeric_limits<double>::quiet_NaN();
        out.flags.positivity_ok = false;
    }
    out.flags.jensen_ok = out.heat >= out.bound_thermo - kInequalitySlack;
    out.flags.landauer_ok = out.heat >= out.bound_entropic - kInequalitySlack;
    return out;
}

ErasureResult run_erasure(const Eigen::Vector3d& v_init, double theta, const bath::BathSpec& spec,
                          const NumericParams& params) {
    const bath::OhmicKernels kernels(spec);
    return run_erasure(v_init, theta, kernels, params);
}

} // namespace landauer::bounds
