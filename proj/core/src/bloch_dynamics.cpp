#include "landauer/bloch_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace landauer::dynamics {

namespace {

using tcl::CoefficientSet;
using tcl::KernelIntegrals;

// Layout: v(4) | same(3) | cross(3)
using PlainState = Eigen::Matrix<cplx, 10, 1>;
// Layout: v(4) | w(4) | same(3) | cross(3) | d cross(3)
using HeatState = Eigen::Matrix<cplx, 17, 1>;

template <class State>
KernelIntegrals read_integrals(const State& y, int offset) {
    KernelIntegrals in;
    for (int k = 0; k < 3; ++k) {
        in.same[k] = y[offset + k];
        in.cross[k] = y[offset + 3 + k];
    }
    return in;
}

template <class State>
void write_rates(State& dy, int offset, const KernelIntegrals& r) {
    for (int k = 0; k < 3; ++k) {
        dy[offset + k] = r.same[k];
        dy[offset + 3 + k] = r.cross[k];
    }
}

ode::AdaptiveOptions stepper_options(const PropagationOptions& options) {
    if (!(options.t_max > 0.0)) throw std::invalid_argument("propagation requires t_max > 0");
    if (!(options.ode_tol > 0.0)) throw std::invalid_argument("propagation requires ode_tol > 0");
    ode::AdaptiveOptions opt;
    opt.rtol = options.ode_tol;
    opt.atol = options.ode_tol;
    return opt;
}

// dG/dt follows from the integrand values alone; the precession is constant.
double generator_rate(const KernelIntegrals& rates, double t, double chi, double theta) {
    const auto dg = tcl::assemble_generator(CoefficientSet::from_integrals(t, rates), chi, theta, false);
    return dg.assembled().cwiseAbs().maxCoeff();
}

void check_initial(const Vector4c& v) {
    const double norm = std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
    if (norm > 1.0 + 1e-12) throw std::domain_error("initial Bloch vector has |v| > 1");
}

} // namespace

CountingBlochState CountingBlochState::from_bloch(const Eigen::Vector3d& bloch, double chi) {
    if (bloch.norm() > 1.0 + 1e-12) throw std::domain_error("initial Bloch vector has |v| > 1");
    CountingBlochState s;
    s.v = Vector4c(bloch[0], bloch[1], bloch[2], 1.0);
    s.chi = chi;
    return s;
}

Eigen::Vector3d CountingBlochState::bloch() const {
    return {v[0].real(), v[1].real(), v[2].real()};
}

Trajectory propagate(const CountingBlochState& initial, double theta,
                     const bath::KernelModel& kernels, const PropagationOptions& options) {
    tcl::check_theta(theta);
    check_initial(initial.v);
    const auto opt = stepper_options(options);
    const double chi = initial.chi;

    auto rhs = [&](double t, const PlainState& y) {
        const auto coeffs = CoefficientSet::from_integrals(t, read_integrals(y, 4));
        const auto g = tcl::assemble_generator(coeffs, chi, theta);
        PlainState dy;
        dy.head<4>() = g.assembled() * y.head<4>();
        write_rates(dy, 4, KernelIntegrals::rates(t, kernels.correlators(t, chi)));
        return dy;
    };

    Trajectory traj;
    traj.chi = chi;
    traj.theta = theta;
    std::optional<SteadyStateMonitor> monitor;
    if (options.stop_at_steady_state) monitor.emplace(*options.stop_at_steady_state);

    auto observe = [&](double t, const PlainState& y, const PlainState& dy) {
        traj.t.push_back(t);
        traj.v.emplace_back(y.head<4>());
        traj.dv.emplace_back(dy.head<4>());
        traj.generator_rate.push_back(generator_rate(read_integrals(dy, 4), t, chi, theta));
        if (!monitor) return true;
        const std::size_t i = traj.size() - 1;
        return !monitor->update(t, stationarity_residual(traj, i), traj.generator_rate[i], i);
    };

    PlainState y0 = PlainState::Zero();
    y0.head<4>() = initial.v;
    traj.stats = ode::integrate_adaptive(rhs, initial.t, y0, initial.t + options.t_max, opt, observe);
    return traj;
}

Trajectory propagate(const CountingBlochState& initial, double chi, double theta,
                     const bath::BathSpec& spec, double t_max, double ode_tol) {
    const bath::OhmicKernels kernels(spec);
    CountingBlochState start = initial;
    start.chi = chi;
    PropagationOptions options;
    options.t_max = t_max;
    options.ode_tol = ode_tol;
    return propagate(start, theta, kernels, options);
}

Trajectory propagate_with_heat(const Eigen::Vector3d& bloch, double theta,
                               const bath::KernelModel& kernels, const PropagationOptions& options) {
    tcl::check_theta(theta);
    const auto initial = CountingBlochState::from_bloch(bloch, 0.0);
    const auto opt = stepper_options(options);

    auto rhs = [&](double t, const HeatState& y) {
        const auto g = tcl::assemble_generator(
            CoefficientSet::from_integrals(t, read_integrals(y, 8)), 0.0, theta);
        KernelIntegrals d_in;
        for (int k = 0; k < 3; ++k) d_in.cross[k] = y[14 + k];
        const auto g_prime =
            tcl::assemble_generator(CoefficientSet::from_integrals(t, d_in), 0.0, theta, false);

        const tcl::Matrix4c gm = g.assembled();
        HeatState dy;
        dy.head<4>() = gm * y.head<4>();
        dy.segment<4>(4) = g_prime.assembled() * y.head<4>() + gm * y.segment<4>(4);
        write_rates(dy, 8, KernelIntegrals::rates(t, kernels.correlators(t, 0.0)));
        const auto d_rates =
            KernelIntegrals::rates(t, bath::Correlators{cplx{}, kernels.cross_derivative(t)});
        for (int k = 0; k < 3; ++k) dy[14 + k] = d_rates.cross[k];
        return dy;
    };

    Trajectory traj;
    traj.chi = 0.0;
    traj.theta = theta;
    std::optional<SteadyStateMonitor> monitor;
    if (options.stop_at_steady_state) monitor.emplace(*options.stop_at_steady_state);

    auto observe = [&](double t, const HeatState& y, const HeatState& dy) {
        traj.t.push_back(t);
        traj.v.emplace_back(y.head<4>());
        traj.dv.emplace_back(dy.head<4>());
        traj.w.emplace_back(y.segment<4>(4));
        traj.dw.emplace_back(dy.segment<4>(4));
        traj.generator_rate.push_back(generator_rate(read_integrals(dy, 8), t, 0.0, theta));
        if (!monitor) return true;
        const std::size_t i = traj.size() - 1;
        return !monitor->update(t, stationarity_residual(traj, i), traj.generator_rate[i], i);
    };

    HeatState y0 = HeatState::Zero();
    y0.head<4>() = initial.v;
    traj.stats = ode::integrate_adaptive(rhs, 0.0, y0, options.t_max, opt, observe);
    return traj;
}

Trajectory propagate_with_heat(const Eigen::Vector3d& bloch, double theta,
                               const bath::BathSpec& spec, double t_max, double ode_tol) {
    const bath::OhmicKernels kernels(spec);
    PropagationOptions options;
    options.t_max = t_max;
    options.ode_tol = ode_tol;
    return propagate_with_heat(bloch, theta, kernels, options);
}

double stationarity_residual(const Trajectory& traj, std::size_t i) {
    const auto& dv = traj.dv.at(i);
    return std::max({std::abs(dv[0]), std::abs(dv[1]), std::abs(dv[2])});
}

bool SteadyStateMonitor::update(double t, double state_rate, double generator_rate,
                                std::size_t index) {
    if (done_) return true;
    if (state_rate < criterion_.eps_ss && generator_rate < criterion_.kernel_eps) {
        if (!quiet_since_) {
            quiet_since_ = t;
            quiet_index_ = index;
        }
        if (t - *quiet_since_ >= criterion_.hold_time) done_ = true;
    } else {
        quiet_since_.reset();
    }
    return done_;
}

SteadyState SteadyStateMonitor::result() const {
    if (!done_) return {};
    return {true, *quiet_since_, quiet_index_};
}

SteadyState find_steady_state(const Trajectory& traj, const SteadyStateCriterion& criterion) {
    SteadyStateMonitor monitor(criterion);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double g = i < traj.generator_rate.size() ? traj.generator_rate[i] : 0.0;
        if (monitor.update(traj.t[i], stationarity_residual(traj, i), g, i)) break;
    }
    return monitor.result();
}

SteadyState detect_steady_state(const Trajectory& traj, const SteadyStateCriterion& criterion) {
    const auto ss = find_steady_state(traj, criterion);
    if (!ss.converged) {
        const double t_end = traj.t.empty() ? 0.0 : traj.t.back();
        throw SteadyStateNotReached("no steady state before t = " + std::to_string(t_end));
    }
    return ss;
}

} // namespace landauer::dynamics
