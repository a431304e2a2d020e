#include "landauer/bath_correlation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>
#include <string>

#include "landauer/polygamma.hpp"

namespace landauer::bath {

namespace {

constexpr unsigned kMaxDepth = 20;

using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

// J(w) n(w) and J(w) (n(w)+1); finite at w -> 0 because J is linear there.
double j_times_n(double w, const BathSpec& s) {
    if (w == 0.0) return s.lambda / s.beta;
    return s.lambda * w * std::exp(-w / s.omega_c) / std::expm1(s.beta * w);
}

double j_times_n_plus_one(double w, const BathSpec& s) {
    if (w == 0.0) return s.lambda / s.beta;
    return -s.lambda * w * std::exp(-w / s.omega_c) / std::expm1(-s.beta * w);
}

template <class F>
cplx integrate_checked(F&& f, const BathSpec& spec, const char* what) {
    double error = 0.0;
    double l1 = 0.0;
    const double upper = spec.omega_max * spec.omega_c;
    const cplx value = GaussKronrod::integrate(f, 0.0, upper, kMaxDepth, spec.quad_tol, &error, &l1);
    // Tolerance is relative to the L1 norm of the integrand; oscillatory
    // integrands at large tau cancel far below their magnitude.
    const double target = spec.quad_tol * std::max(l1, std::abs(value));
    if (!std::isfinite(error) || error > 10.0 * target) {
        std::ostringstream msg;
        msg << what << ": quadrature did not converge (estimate " << error << ", requested "
            << target << ")";
        throw QuadratureError(msg.str(), error, target);
    }
    return value;
}

void check_tau(double tau) {
    if (!(tau >= 0.0)) throw std::domain_error("kernel evaluation requires tau >= 0");
}

} // namespace

void BathSpec::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("BathSpec: " + msg); };
    if (!(lambda > 0.0)) fail("lambda must be positive");
    if (!(omega_c > 0.0)) fail("omega_c must be positive");
    if (!(beta > 0.0)) fail("beta must be positive");
    if (!(quad_tol > 0.0 && quad_tol <= 1e-3)) fail("quad_tol must lie in (0, 1e-3]");
    if (!(omega_max >= 20.0)) fail("omega_max must be at least 20");
}

double spectral_density(double omega, const BathSpec& spec) {
    if (omega < 0.0) throw std::domain_error("spectral_density: omega must be non-negative");
    return spec.lambda * omega * std::exp(-omega / spec.omega_c);
}

double bose_occupation(double omega, double beta) {
    if (!(omega > 0.0)) throw std::domain_error("bose_occupation: omega must be positive");
    return 1.0 / std::expm1(beta * omega);
}

KernelSample make_kernel_sample(double tau, const Correlators& c) {
    const cplx same_c = std::conj(c.same);
    const cplx cross_c = std::conj(c.cross);
    return {tau, c.same + c.cross, c.same - c.cross, same_c + cross_c, same_c - cross_c};
}

Correlators ohmic_correlators_quadrature(double tau, double chi, const BathSpec& spec) {
    check_tau(tau);
    const cplx i{0.0, 1.0};
    auto same = [&](double w) {
        const cplx phase = std::exp(i * (w * tau));
        return j_times_n(w, spec) * phase + j_times_n_plus_one(w, spec) * std::conj(phase);
    };
    auto cross = [&](double w) {
        const cplx phase = std::exp(i * (w * tau));
        return j_times_n(w, spec) * std::exp(chi * w) * phase +
               j_times_n_plus_one(w, spec) * std::exp(-chi * w) * std::conj(phase);
    };
    return {integrate_checked(same, spec, "same correlator"),
            integrate_checked(cross, spec, "cross correlator")};
}

cplx ohmic_cross_derivative_quadrature(double tau, const BathSpec& spec) {
    check_tau(tau);
    const cplx i{0.0, 1.0};
    auto f = [&](double w) {
        const cplx phase = std::exp(i * (w * tau));
        return w * (j_times_n_plus_one(w, spec) * std::conj(phase) - j_times_n(w, spec) * phase);
    };
    return integrate_checked(f, spec, "cross correlator chi-derivative");
}

// n = sum_{k>=1} e^{-k beta w}, n+1 = sum_{k>=0} e^{-k beta w} and
// int_0^inf w e^{-p w} dw = 1/p^2, so each Bose branch is a trigamma series.
Correlators ohmic_correlators_series(double tau, double chi, const BathSpec& spec) {
    check_tau(tau);
    const double inv_cut = 1.0 / spec.omega_c;
    const double b = spec.beta;
    if (!(chi > -inv_cut && chi < b + inv_cut)) {
        throw std::domain_error("ohmic_correlators_series: chi outside the convergence strip");
    }
    const double scale = spec.lambda / (b * b);
    auto pair = [&](double shift) {
        const cplx absorb{inv_cut + b - shift, -tau};
        const cplx emit{inv_cut + shift, tau};
        return scale * (special::trigamma(absorb / b) + special::trigamma(emit / b));
    };
    return {pair(0.0), pair(chi)};
}

cplx ohmic_cross_derivative_series(double tau, const BathSpec& spec) {
    check_tau(tau);
    const double inv_cut = 1.0 / spec.omega_c;
    const double b = spec.beta;
    const cplx absorb{inv_cut + b, -tau};
    const cplx emit{inv_cut, tau};
    return spec.lambda / (b * b * b) *
           (special::tetragamma(absorb / b) - special::tetragamma(emit / b));
}

KernelSample counting_kernels(double tau, double chi, const BathSpec& spec) {
    spec.validate();
    return make_kernel_sample(tau, ohmic_correlators_quadrature(tau, chi, spec));
}

KernelDerivative kernel_chi_derivative(double tau, const BathSpec& spec) {
    spec.validate();
    const cplx d = ohmic_cross_derivative_quadrature(tau, spec);
    return {d, -d};
}

OhmicKernels::OhmicKernels(BathSpec spec, Method method) : spec_(spec), method_(method) {
    spec_.validate();
}

Correlators OhmicKernels::correlators(double tau, double chi) const {
    return method_ == Method::series ? ohmic_correlators_series(tau, chi, spec_)
                                     : ohmic_correlators_quadrature(tau, chi, spec_);
}

cplx OhmicKernels::cross_derivative(double tau) const {
    return method_ == Method::series ? ohmic_cross_derivative_series(tau, spec_)
                                     : ohmic_cross_derivative_quadrature(tau, spec_);
}

DiscreteModeKernels::DiscreteModeKernels(std::vector<double> frequencies,
                                         std::vector<double> couplings, double beta)
    : frequencies_(std::move(frequencies)), beta_(beta) {
    if (frequencies_.size() != couplings.size()) {
        throw std::invalid_argument("DiscreteModeKernels: frequency/coupling size mismatch");
    }
    if (!(beta_ > 0.0)) throw std::invalid_argument("DiscreteModeKernels: beta must be positive");
    weights_.reserve(couplings.size());
    for (std::size_t k = 0; k < couplings.size(); ++k) {
        if (!(frequencies_[k] > 0.0)) {
            throw std::invalid_argument("DiscreteModeKernels: frequencies must be positive");
        }
        weights_.push_back(couplings[k] * couplings[k]);
    }
}

Correlators DiscreteModeKernels::correlators(double tau, double chi) const {
    const cplx i{0.0, 1.0};
    Correlators out{};
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        const double w = frequencies_[k];
        const double n = bose_occupation(w, beta_);
        const cplx phase = std::exp(i * (w * tau));
        out.same += weights_[k] * (n * phase + (n + 1.0) * std::conj(phase));
        out.cross += weights_[k] *
                     (n * std::exp(chi * w) * phase + (n + 1.0) * std::exp(-chi * w) * std::conj(phase));
    }
    return out;
}

cplx DiscreteModeKernels::cross_derivative(double tau) const {
    const cplx i{0.0, 1.0};
    cplx out{};
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        const double w = frequencies_[k];
        const double n = bose_occupation(w, beta_);
        const cplx phase = std::exp(i * (w * tau));
        out += weights_[k] * w * ((n + 1.0) * std::conj(phase) - n * phase);
    }
    return out;
}

} // namespace landauer::bath
