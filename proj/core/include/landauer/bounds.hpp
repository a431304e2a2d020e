// bounds.hpp: Dissipated energy and its entropic and thermodynamic lower bounds
// for one erasure run.

#pragma once

#include <Eigen/Core>

#include "landauer/bath_correlation.hpp"

namespace landauer::bounds {

// Von Neumann entropy -sum p ln p with p_{+-} = (1 +- |v|)/2.
// Throws std::domain_error for |v| > 1 (a rounding slack of 1e-12 is absorbed).
double entropy_from_bloch(const Eigen::Vector3d& v);

// B_E = (S(v_init) - S(v_final)) / beta. May be negative.
double entropic_bound(const Eigen::Vector3d& v_init, const Eigen::Vector3d& v_final, double beta);

// B_T = -ln(v_0^(beta)) / beta. Throws std::domain_error for a non-positive trace.
double thermodynamic_bound(double v0_beta_final, double beta);

struct NumericParams {
    double ode_tol{1e-10};
    double eps_ss{1e-6};
    double hold_time{20.0};
    double kernel_eps{1e-6};
    double t_max{5000.0};
};

struct ErasureFlags {
    bool converged{false};
    bool positivity_ok{true};  // |v(t)| <= 1 + 1e-6 along the chi = 0 trajectory
    bool jensen_ok{true};      // heat >= B_T - 1e-9
    bool landauer_ok{true};    // heat >= B_E - 1e-9
};

struct ErasureResult {
    double theta{0.0};
    Eigen::Vector3d v_init{Eigen::Vector3d::Zero()};
    double t_ss{0.0};
    double heat{0.0};
    double bound_entropic{0.0};
    double bound_thermo{0.0};
    Eigen::Vector3d v_final{Eigen::Vector3d::Zero()};
    double v0_beta{1.0};         // trace of the chi = beta state at t_ss
    double max_bloch_norm{0.0};  // over the chi = 0 trajectory
    ErasureFlags flags;
};

// Propagates at chi = 0 (with the heat derivative) until the steady state, then
// at chi = beta up to the same time, and evaluates heat and both bounds at t_ss.
// A run that never becomes stationary is evaluated at t_max with
// converged = false.
ErasureResult run_erasure(const Eigen::Vector3d& v_init, double theta,
                          const bath::KernelModel& kernels, const NumericParams& params = {});
ErasureResult run_erasure(const Eigen::Vector3d& v_init, double theta, const bath::BathSpec& spec,
                          const NumericParams& params = {});

} // namespace landauer::bounds
