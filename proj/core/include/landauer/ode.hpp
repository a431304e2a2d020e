// ode.hpp: Adaptive Dormand-Prince 5(4) integrator for complex Eigen vectors
//
// The right-hand side is called as f(t, y) -> dy/dt. The observer sees every
// accepted point (t, y, dy/dt), starting with the initial one; returning false
// stops the integration early. dy/dt at accepted points comes for free from the
// first-same-as-last stage.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>

#include <Eigen/Core>

namespace landauer::ode {

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t, double step)
        : std::runtime_error(what), t_(t), step_(step) {}
    double time() const noexcept { return t_; }
    double step() const noexcept { return step_; }

private:
    double t_;
    double step_;
};

struct AdaptiveOptions {
    double rtol{1e-10};
    double atol{1e-10};
    double initial_step{1e-3};
    double max_step{0.5};
    double min_step{1e-13};
    std::size_t max_steps{50'000'000};
};

struct IntegrationStats {
    std::size_t accepted{0};
    std::size_t rejected{0};
    std::size_t rhs_evaluations{0};
    double max_error_estimate{0.0};  // largest normalized error among accepted steps
    double t_final{0.0};
    bool stopped_by_observer{false};
};

template <class Vec, class Rhs, class Observer>
IntegrationStats integrate_adaptive(Rhs&& f, double t0, Vec y, double t_end,
                                    const AdaptiveOptions& opt, Observer&& observer) {
    // Dormand & Prince (1980) tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    IntegrationStats stats;
    double t = t0;
    Vec k1 = f(t, y);
    ++stats.rhs_evaluations;
    stats.t_final = t;
    if (!observer(t, y, k1)) {
        stats.stopped_by_observer = true;
        return stats;
    }

    double h = std::min(opt.initial_step, t_end - t0);
    double err_prev = 1e-4;
    Vec k2, k3, k4, k5, k6, k7, y_new, err;

    while (t < t_end) {
        if (stats.accepted + stats.rejected >= opt.max_steps) {
            throw IntegrationError("integrate_adaptive: step budget exhausted", t, h);
        }
        bool last = false;
        if (t + h >= t_end) {
            h = t_end - t;
            last = true;
        }
        k2 = f(t + c2 * h, y + h * (a21 * k1));
        k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = f(t + h, y_new);
        stats.rhs_evaluations += 6;

        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double sum = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double scale =
                opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            const double r = std::abs(err[i]) / scale;
            sum += r * r;
        }
        const double err_norm = std::sqrt(sum / static_cast<double>(y.size()));

        if (err_norm <= 1.0) {
            t = last ? t_end : t + h;
            y = y_new;
            k1 = k7;
            ++stats.accepted;
            stats.max_error_estimate = std::max(stats.max_error_estimate, err_norm);
            stats.t_final = t;
            if (!observer(t, y, k1)) {
                stats.stopped_by_observer = true;
                return stats;
            }
            // PI step-size controller (Hairer & Wanner II.4).
            const double e = std::max(err_norm, 1e-10);
            double factor = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            factor = std::clamp(factor, 0.2, 5.0);
            err_prev = e;
            h = std::min(h * factor, opt.max_step);
        } else {
            ++stats.rejected;
            h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
        }
        if (t < t_end && h < opt.min_step * std::max(1.0, std::abs(t))) {
            std::ostringstream msg;
            msg << "integrate_adaptive: step size underflow at t = " << t << " (h = " << h << ")";
            throw IntegrationError(msg.str(), t, h);
        }
    }
    return stats;
}

} // namespace landauer::ode
