// tcl_generator.hpp: Coefficient integrals and the 4x4 counting-field Bloch
// generator of the second-order TCL master equation.
//
// Model: H_S = (omega0/2) sigma_z, H_SR = (cos(theta) sigma_x + sin(theta) sigma_z) x B_R,
// omega0 = 1. The Bloch vector is ordered (v_x, v_y, v_z, v_0) with v_0 = Tr rho^(chi).
//
// Coefficients (s, p in {+,-}; the subscript s selects h_s, the superscript p the
// sign of the conjugate kernel):
//   a_s^p(t) = -int_0^t [h_s(tau) + p h_s^conj(tau)] cos(tau) dtau
//   b_s^p(t) = -int_0^t [h_s(tau) + p h_s^conj(tau)] sin(tau) dtau
//   c_s^p(t) = -int_0^t [h_s(tau) + p h_s^conj(tau)]          dtau

#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

#include "landauer/bath_correlation.hpp"

namespace landauer::tcl {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

inline constexpr double omega0 = 1.0;

// Weight index for the cumulative kernel integrals.
enum Weight : int { weight_cos = 0, weight_sin = 1, weight_one = 2 };

// int_0^t K(tau) w(tau) dtau for K in {same, cross} and w in {cos, sin, 1}.
struct KernelIntegrals {
    std::array<cplx, 3> same{};
    std::array<cplx, 3> cross{};

    // d/dt of the integrals at time t for the given correlator values.
    static KernelIntegrals rates(double t, const bath::Correlators& c);
};

struct CoefficientSet {
    double t{0.0};
    cplx a_pp, a_pm, a_mp, a_mm;
    cplx b_pp, b_pm, b_mp, b_mm;
    cplx c_pp, c_pm, c_mp, c_mm;

    static CoefficientSet from_integrals(double t, const KernelIntegrals& in);
};

struct GeneratorMatrix {
    double t{0.0};
    double chi{0.0};
    double theta{0.0};
    Matrix2c A11, A12, A21, A22;

    Matrix4c assembled() const;
};

// Assembles the blocks from a coefficient set. With include_precession = false
// the +-omega0 entries are omitted, which is what the chi-derivative needs.
GeneratorMatrix assemble_generator(const CoefficientSet& coeffs, double chi, double theta,
                                   bool include_precession = true);

// Cumulative integrals by adaptive integration of the tau-ODE with the same
// stepper the propagators use.
KernelIntegrals kernel_integrals(double t, double chi, const bath::KernelModel& kernels,
                                 double tol = 1e-12);
// Integrals of (0, d cross/d(-chi)) weighted the same way.
KernelIntegrals kernel_derivative_integrals(double t, const bath::KernelModel& kernels,
                                            double tol = 1e-12);

CoefficientSet coefficient_integrals(double t, double chi, const bath::BathSpec& spec);

GeneratorMatrix generator(double t, double chi, double theta, const bath::BathSpec& spec);

// dG/d(-chi) at chi = 0.
Matrix4c generator_chi_derivative(double t, double theta, const bath::BathSpec& spec);

void check_theta(double theta);

} // namespace landauer::tcl
