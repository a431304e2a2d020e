// bloch_dynamics.hpp: Propagation of the counting-field Bloch equation
// dv/dt = G^(chi)(t) v and of its chi-derivative for the mean dissipated energy.
//
// The cumulative kernel integrals that define G(t) are carried as extra ODE
// components, so the generator and the Bloch vector share the step grid.

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "landauer/bath_correlation.hpp"
#include "landauer/ode.hpp"
#include "landauer/tcl_generator.hpp"

namespace landauer::dynamics {

using cplx = std::complex<double>;
using Vector4c = Eigen::Vector4cd;

struct CountingBlochState {
    double t{0.0};
    Vector4c v{Vector4c(0.0, 0.0, 0.0, 1.0)};
    double chi{0.0};

    // Physical initial state: (v_x, v_y, v_z, 1). Throws if |v| > 1.
    static CountingBlochState from_bloch(const Eigen::Vector3d& bloch, double chi = 0.0);
    Eigen::Vector3d bloch() const;  // real parts of (v_x, v_y, v_z)
};

// w = d v^(chi) / d(-chi) at chi = 0; the mean dissipated energy is w_0.
struct HeatAccumulator {
    Vector4c w{Vector4c::Zero()};
    cplx q() const { return w[3]; }
};

// The protocol is over once both rates stay small for hold_time:
//   max |dv_k/dt| (k = x, y, z) < eps_ss   and   max |dG/dt| < kernel_eps.
// The second condition waits for the memory of the time-local generator to
// decay; set kernel_eps to infinity for the state-only rule.
struct SteadyStateCriterion {
    double eps_ss{1e-6};
    double hold_time{20.0};
    double kernel_eps{1e-6};

    static SteadyStateCriterion state_only(double eps_ss, double hold_time) {
        return {eps_ss, hold_time, std::numeric_limits<double>::infinity()};
    }
};

class SteadyStateNotReached : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PropagationOptions {
    double t_max{5000.0};
    double ode_tol{1e-10};
    // When set, integration stops once the criterion has held for hold_time.
    std::optional<SteadyStateCriterion> stop_at_steady_state;
};

struct Trajectory {
    double chi{0.0};
    double theta{0.0};
    std::vector<double> t;
    std::vector<Vector4c> v;
    std::vector<Vector4c> dv;  // dv/dt at each sample
    std::vector<double> generator_rate;  // max |dG/dt| entry at each sample
    // Only filled by propagate_with_heat.
    std::vector<Vector4c> w;
    std::vector<Vector4c> dw;
    ode::IntegrationStats stats;

    bool has_heat() const { return !w.empty(); }
    std::size_t size() const { return t.size(); }
    CountingBlochState state(std::size_t i) const { return {t[i], v[i], chi}; }
    HeatAccumulator heat(std::size_t i) const { return {w.at(i)}; }
};

Trajectory propagate(const CountingBlochState& initial, double theta,
                     const bath::KernelModel& kernels, const PropagationOptions& options);
Trajectory propagate(const CountingBlochState& initial, double chi, double theta,
                     const bath::BathSpec& spec, double t_max, double ode_tol = 1e-10);

// Joint propagation of v at chi = 0 and w = dv/d(-chi):
//   dv/dt = G(t) v,  dw/dt = G'(t) v + G(t) w.
Trajectory propagate_with_heat(const Eigen::Vector3d& bloch, double theta,
                               const bath::KernelModel& kernels, const PropagationOptions& options);
Trajectory propagate_with_heat(const Eigen::Vector3d& bloch, double theta,
                               const bath::BathSpec& spec, double t_max, double ode_tol = 1e-10);

struct SteadyState {
    bool converged{false};
    double t_ss{0.0};
    std::size_t index{0};
};

// Largest rate among dv_x, dv_y, dv_z at sample i.
double stationarity_residual(const Trajectory& traj, std::size_t i);

// Earliest sample time from which the criterion holds for at least hold_time.
// Throws SteadyStateNotReached if the trajectory ends before that.
SteadyState detect_steady_state(const Trajectory& traj, const SteadyStateCriterion& criterion);
// Same rule; returns converged = false instead of throwing.
SteadyState find_steady_state(const Trajectory& traj, const SteadyStateCriterion& criterion);

// Streaming form of the same rule, used for early termination.
class SteadyStateMonitor {
public:
    explicit SteadyStateMonitor(SteadyStateCriterion criterion) : criterion_(criterion) {}
    // Feeds the next sample; returns true once the hold time is satisfied.
    bool update(double t, double state_rate, double generator_rate, std::size_t index);
    SteadyState result() const;

private:
    SteadyStateCriterion criterion_;
    std::optional<double> quiet_since_;
    std::size_t quiet_index_{0};
    bool done_{false};
};

} // namespace landauer::dynamics
