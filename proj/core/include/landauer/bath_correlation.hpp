// bath_correlation.hpp: Ohmic bath, Bose occupation and counting-field dressed
// reservoir correlation kernels.
//
// All frequencies are in units of the spin splitting omega0, times in 1/omega0.
// The reservoir operator B_R = sum_k g_k (b_k^dag + b_k) is dressed as
// B^(chi) = exp(-chi H_R/2) B exp(+chi H_R/2), i.e. b_k -> b_k e^{+chi w_k/2},
// b_k^dag -> b_k^dag e^{-chi w_k/2}. Two correlators enter the TCL2 generator:
//
//   same(tau)  = <B^(chi)  B^(chi)(-tau)> = int J [n e^{i w tau} + (n+1) e^{-i w tau}]
//   cross(tau) = <B^(-chi) B^(chi)(-tau)> = int J [n e^{chi w} e^{i w tau}
//                                                 + (n+1) e^{-chi w} e^{-i w tau}]
//
// `same` does not depend on chi. At chi = beta the KMS relation n e^{beta w} = n+1
// gives cross = conj(same).

#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace landauer::bath {

using cplx = std::complex<double>;

struct BathSpec {
    double lambda{0.01};     // dimensionless coupling
    double omega_c{1.0};     // cutoff frequency Omega
    double beta{1.0};        // inverse temperature
    double quad_tol{1e-10};  // relative quadrature tolerance
    double omega_max{40.0};  // upper integration limit in units of omega_c

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Raised when adaptive quadrature cannot reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double requested)
        : std::runtime_error(what), estimate_(estimate), requested_(requested) {}
    double estimate() const noexcept { return estimate_; }
    double requested() const noexcept { return requested_; }

private:
    double estimate_;
    double requested_;
};

// J(w) = lambda w exp(-w/Omega); throws std::domain_error for w < 0.
double spectral_density(double omega, const BathSpec& spec);

// n(w) = 1/(exp(beta w) - 1), w > 0.
double bose_occupation(double omega, double beta);

struct Correlators {
    cplx same;   // <B^(chi) B^(chi)(-tau)>
    cplx cross;  // <B^(-chi) B^(chi)(-tau)>
};

// Kernels in the +/- combination used by the generator coefficients.
//   h_plus  = same + cross,            h_minus  = same - cross
//   h_plus_conj  = conj(same) + conj(cross)
//   h_minus_conj = conj(same) - conj(cross)
// The conjugate pair are the reversed-order correlators
// <B^(-chi)(-tau) B^(-chi)> +- <B^(-chi)(-tau) B^(chi)>, which coincide with the
// complex conjugates of the forward ones for real chi.
struct KernelSample {
    double tau{0.0};
    cplx h_plus;
    cplx h_minus;
    cplx h_plus_conj;
    cplx h_minus_conj;
};

KernelSample make_kernel_sample(double tau, const Correlators& c);

// Derivatives with respect to (-chi) at chi = 0.
struct KernelDerivative {
    cplx d_plus;   // d h_plus / d(-chi)
    cplx d_minus;  // d h_minus / d(-chi)
};

// Reference path: adaptive Gauss-Kronrod over [0, omega_max * omega_c].
Correlators ohmic_correlators_quadrature(double tau, double chi, const BathSpec& spec);
cplx ohmic_cross_derivative_quadrature(double tau, const BathSpec& spec);

// Semi-analytic path: the Bose factor expanded as a geometric series and summed
// in closed form with complex polygamma functions. Requires
// -1/omega_c < chi < beta + 1/omega_c.
Correlators ohmic_correlators_series(double tau, double chi, const BathSpec& spec);
cplx ohmic_cross_derivative_series(double tau, const BathSpec& spec);

KernelSample counting_kernels(double tau, double chi, const BathSpec& spec);
KernelDerivative kernel_chi_derivative(double tau, const BathSpec& spec);

// Source of correlation kernels for the propagators. Implementations are
// immutable after construction and safe to share across threads.
class KernelModel {
public:
    virtual ~KernelModel() = default;
    virtual Correlators correlators(double tau, double chi) const = 0;
    // d cross / d(-chi) at chi = 0 (same is chi independent).
    virtual cplx cross_derivative(double tau) const = 0;
    virtual double beta() const = 0;
};

class OhmicKernels final : public KernelModel {
public:
    enum class Method { series, quadrature };

    explicit OhmicKernels(BathSpec spec, Method method = Method::series);

    Correlators correlators(double tau, double chi) const override;
    cplx cross_derivative(double tau) const override;
    double beta() const override { return spec_.beta; }
    const BathSpec& spec() const { return spec_; }

private:
    BathSpec spec_;
    Method method_;
};

// Finite set of modes: J(w) = sum_k g_k^2 delta(w - w_k).
class DiscreteModeKernels final : public KernelModel {
public:
    DiscreteModeKernels(std::vector<double> frequencies, std::vector<double> couplings, double beta);

    Correlators correlators(double tau, double chi) const override;
    cplx cross_derivative(double tau) const override;
    double beta() const override { return beta_; }

private:
    std::vector<double> frequencies_;
    std::vector<double> weights_;  // g_k^2
    double beta_;
};

} // namespace landauer::bath
