#include "landauer/tcl_generator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "landauer/ode.hpp"

namespace landauer::tcl {

namespace {

using Vec6 = Eigen::Matrix<cplx, 6, 1>;

KernelIntegrals unpack(const Vec6& y) {
    KernelIntegrals out;
    for (int k = 0; k < 3; ++k) {
        out.same[k] = y[k];
        out.cross[k] = y[3 + k];
    }
    return out;
}

Vec6 pack(const KernelIntegrals& in) {
    Vec6 y;
    for (int k = 0; k < 3; ++k) {
        y[k] = in.same[k];
        y[3 + k] = in.cross[k];
    }
    return y;
}

template <class KernelFn>
KernelIntegrals integrate_kernels(double t, double tol, KernelFn&& kernel) {
    if (!(t >= 0.0)) throw std::domain_error("coefficient integrals require t >= 0");
    if (t == 0.0) return {};
    ode::AdaptiveOptions opt;
    opt.rtol = tol;
    opt.atol = tol;
    Vec6 result = Vec6::Zero();
    auto rhs = [&](double tau, const Vec6&) { return pack(KernelIntegrals::rates(tau, kernel(tau))); };
    auto keep = [&](double, const Vec6& y, const Vec6&) {
        result = y;
        return true;
    };
    ode::integrate_adaptive(rhs, 0.0, Vec6(Vec6::Zero()), t, opt, keep);
    return unpack(result);
}

} // namespace

void check_theta(double theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw std::domain_error("tilt angle theta must lie in [0, pi]");
    }
}

KernelIntegrals KernelIntegrals::rates(double t, const bath::Correlators& c) {
    const double cw = std::cos(omega0 * t);
    const double sw = std::sin(omega0 * t);
    KernelIntegrals r;
    r.same = {c.same * cw, c.same * sw, c.same};
    r.cross = {c.cross * cw, c.cross * sw, c.cross};
    return r;
}

CoefficientSet CoefficientSet::from_integrals(double t, const KernelIntegrals& in) {
    // h_s integrates to same + s*cross; the conjugate kernel to its conjugate.
    auto coeff = [&](int w, double s, double p) {
        const cplx h = in.same[w] + s * in.cross[w];
        return -(h + p * std::conj(h));
    };
    CoefficientSet c;
    c.t = t;
    c.a_pp = coeff(weight_cos, +1, +1);
    c.a_pm = coeff(weight_cos, +1, -1);
    c.a_mp = coeff(weight_cos, -1, +1);
    c.a_mm = coeff(weight_cos, -1, -1);
    c.b_pp = coeff(weight_sin, +1, +1);
    c.b_pm = coeff(weight_sin, +1, -1);
    c.b_mp = coeff(weight_sin, -1, +1);
    c.b_mm = coeff(weight_sin, -1, -1);
    c.c_pp = coeff(weight_one, +1, +1);
    c.c_pm = coeff(weight_one, +1, -1);
    c.c_mp = coeff(weight_one, -1, +1);
    c.c_mm = coeff(weight_one, -1, -1);
    return c;
}

Matrix4c GeneratorMatrix::assembled() const {
    Matrix4c g;
    g << A11, A12, A21, A22;
    return g;
}

GeneratorMatrix assemble_generator(const CoefficientSet& k, double chi, double theta,
                                   bool include_precession) {
    check_theta(theta);
    const cplx i{0.0, 1.0};
    const double cos2 = std::cos(theta) * std::cos(theta);
    const double sin2 = std::sin(theta) * std::sin(theta);
    const double half_sin2t = 0.5 * std::sin(2.0 * theta);
    const double w0 = include_precession ? omega0 : 0.0;

    GeneratorMatrix g;
    g.t = k.t;
    g.chi = chi;
    g.theta = theta;
    g.A11 << k.a_mp * cos2 + k.c_pp * sin2, -w0 + k.b_mp * cos2,
             w0 - k.b_pp * cos2,             k.a_pp * cos2 + k.c_pp * sin2;
    // (1,1) entry: c_-^+ - a_+^+ (the projection of the superoperator fixes the
    // superscript of a_+).
    g.A12 << k.c_mp - k.a_pp, -i * k.b_pm,
             -k.b_pp,          i * (k.a_pm - k.c_pm);
    g.A12 *= half_sin2t;
    g.A21 << k.a_mp - k.c_pp, k.b_mp,
             -i * k.b_mm,     i * (k.a_mm - k.c_mm);
    g.A21 *= half_sin2t;
    g.A22 << k.a_pp * cos2 + k.c_mp * sin2, i * k.b_pm * cos2,
             i * k.b_mm * cos2,             k.a_mp * cos2 + k.c_mp * sin2;
    return g;
}

KernelIntegrals kernel_integrals(double t, double chi, const bath::KernelModel& kernels, double tol) {
    return integrate_kernels(t, tol, [&](double tau) { return kernels.correlators(tau, chi); });
}

KernelIntegrals kernel_derivative_integrals(double t, const bath::KernelModel& kernels, double tol) {
    return integrate_kernels(t, tol, [&](double tau) {
        return bath::Correlators{cplx{0.0, 0.0}, kernels.cross_derivative(tau)};
    });
}

CoefficientSet coefficient_integrals(double t, double chi, const bath::BathSpec& spec) {
    const bath::OhmicKernels kernels(spec);
    return CoefficientSet::from_integrals(t, kernel_integrals(t, chi, kernels));
}

GeneratorMatrix generator(double t, double chi, double theta, const bath::BathSpec& spec) {
    check_theta(theta);
    return assemble_generator(coefficient_integrals(t, chi, spec), chi, theta);
}

Matrix4c generator_chi_derivative(double t, double theta, const bath::BathSpec& spec) {
    check_theta(theta);
    const bath::OhmicKernels kernels(spec);
    const auto coeffs = CoefficientSet::from_integrals(t, kernel_derivative_integrals(t, kernels));
    return assemble_generator(coeffs, 0.0, theta, false).assembled();
}

} // namespace landauer::tcl
