#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "landauer/tcl_generator.hpp"
#include "support/superoperator.hpp"

using namespace landauer;
using tcl::Matrix4c;

namespace {

constexpr double pi = std::numbers::pi;

const std::vector<double> kThetas{0.0, 0.3, pi / 4, 1.1, pi / 2, 2.2, 3.0, pi};

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

tcl::CoefficientSet coefficients(double t, double chi) {
    return tcl::coefficient_integrals(t, chi, bath::BathSpec{});
}

} // namespace

TEST_CASE("coefficients vanish at t = 0") {
    for (double chi : {0.0, 0.5, 1.0}) {
        const auto c = coefficients(0.0, chi);
        for (auto x : {c.a_pp, c.a_pm, c.a_mp, c.a_mm, c.b_pp, c.b_pm, c.b_mp, c.b_mm, c.c_pp, c.c_pm,
                       c.c_mp, c.c_mm}) {
            CHECK(x == tcl::cplx{});
        }
    }
}

TEST_CASE("coefficients built from h_minus vanish at chi = 0") {
    for (double t : {0.7, 4.0, 30.0}) {
        const auto c = coefficients(t, 0.0);
        CHECK(std::abs(c.c_mp) < 1e-14);
        for (auto x : {c.a_mp, c.a_mm, c.b_mp, c.b_mm, c.c_mm}) CHECK(std::abs(x) < 1e-14);
        CHECK(std::abs(c.c_pp) > 1e-3);
    }
}

TEST_CASE("coefficients match brute-force trapezoid integration at t = 5, chi = beta") {
    const bath::BathSpec spec;
    const double t = 5.0;
    const double chi = spec.beta;
    const int n = 20000;
    const double h = t / n;
    // sums[k] for weights cos, sin, 1 of h_plus, h_minus, h_plus_conj, h_minus_conj
    std::array<std::array<tcl::cplx, 3>, 4> sums{};
    for (int i = 0; i <= n; ++i) {
        const double tau = i * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        const auto k = bath::counting_kernels(tau, chi, spec);
        const tcl::cplx kernels[4] = {k.h_plus, k.h_minus, k.h_plus_conj, k.h_minus_conj};
        const double weights[3] = {std::cos(tau), std::sin(tau), 1.0};
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 3; ++b) sums[a][b] += w * h * kernels[a] * weights[b];
        }
    }
    // x_s^p = -int (h_s + p h_s_conj) w
    auto coeff = [&](int s, int p, int weight) {
        const tcl::cplx hs = sums[s][weight];
        const tcl::cplx hc = sums[s + 2][weight];
        return -(hs + (p > 0 ? 1.0 : -1.0) * hc);
    };
    const auto c = coefficients(t, chi);
    const double tol = 1e-8;
    CHECK(std::abs(c.a_pp - coeff(0, +1, 0)) < tol);
    CHECK(std::abs(c.a_pm - coeff(0, -1, 0)) < tol);
    CHECK(std::abs(c.a_mp - coeff(1, +1, 0)) < tol);
    CHECK(std::abs(c.a_mm - coeff(1, -1, 0)) < tol);
    CHECK(std::abs(c.b_pp - coeff(0, +1, 1)) < tol);
    CHECK(std::abs(c.b_pm - coeff(0, -1, 1)) < tol);
    CHECK(std::abs(c.b_mp - coeff(1, +1, 1)) < tol);
    CHECK(std::abs(c.b_mm - coeff(1, -1, 1)) < tol);
    CHECK(std::abs(c.c_pp - coeff(0, +1, 2)) < tol);
    CHECK(std::abs(c.c_pm - coeff(0, -1, 2)) < tol);
    CHECK(std::abs(c.c_mp - coeff(1, +1, 2)) < tol);
    CHECK(std::abs(c.c_mm - coeff(1, -1, 2)) < tol);
}

TEST_CASE("generator equals the projected operator-form superoperator") {
    const bath::OhmicKernels kernels(bath::BathSpec{});
    for (double t : {0.5, 3.0, 12.0}) {
        for (double chi : {-0.3, 0.0, 0.5, 1.0}) {
            const auto coeffs = tcl::CoefficientSet::from_integrals(t, tcl::kernel_integrals(t, chi, kernels));
            for (double theta : kThetas) {
                const Matrix4c g = tcl::assemble_generator(coeffs, chi, theta).assembled();
                const Matrix4c ref = testing::projected_generator(t, chi, theta, kernels, 6000);
                CAPTURE(t);
                CAPTURE(chi);
                CAPTURE(theta);
                CHECK(max_abs(g - ref) < 1e-10);
            }
        }
    }
}

TEST_CASE("chi derivative equals the projected derivative superoperator") {
    const bath::BathSpec spec;
    const bath::OhmicKernels kernels(spec);
    for (double t : {0.5, 3.0, 12.0}) {
        for (double theta : kThetas) {
            const Matrix4c g = tcl::generator_chi_derivative(t, theta, spec);
            const Matrix4c ref = testing::projected_generator_derivative(t, theta, kernels, 6000);
            CHECK(max_abs(g - ref) < 1e-10);
        }
    }
}

TEST_CASE("chi derivative matches a central finite difference of the generator") {
    const bath::BathSpec spec;
    const double d = 1e-4 * spec.beta;
    for (double t : {1.0, 6.0, 25.0}) {
        for (double theta : {0.0, 0.4, pi / 4, pi / 2, 2.8}) {
            const Matrix4c g_prime = tcl::generator_chi_derivative(t, theta, spec);
            const Matrix4c fd = -(tcl::generator(t, d, theta, spec).assembled() -
                                  tcl::generator(t, -d, theta, spec).assembled()) /
                                (2.0 * d);
            const double scale = max_abs(g_prime);
            CAPTURE(t);
            CAPTURE(theta);
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    const double tol = 1e-5 * std::max(std::abs(g_prime(i, j)), 1e-3 * scale);
                    CHECK(std::abs(fd(i, j) - g_prime(i, j)) <= tol);
                }
            }
        }
    }
}

TEST_CASE("trace row of the chi = 0 generator vanishes") {
    const bath::BathSpec spec;
    const bath::OhmicKernels kernels(spec);
    for (double t = 0.25; t < 200.0; t *= 1.7) {
        const auto coeffs = tcl::CoefficientSet::from_integrals(t, tcl::kernel_integrals(t, 0.0, kernels));
        for (double theta = 0.0; theta <= pi; theta += pi / 16) {
            const Matrix4c g = tcl::assemble_generator(coeffs, 0.0, theta).assembled();
            CHECK(g.row(3).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("coupling blocks vanish when sin(2 theta) = 0") {
    const bath::OhmicKernels kernels(bath::BathSpec{});
    for (double t : {0.3, 2.0, 9.0, 40.0}) {
        for (double chi : {0.0, 0.4, 1.0}) {
            const auto coeffs = tcl::CoefficientSet::from_integrals(t, tcl::kernel_integrals(t, chi, kernels));
            for (double theta : {0.0, pi / 2, pi}) {
                const auto g = tcl::assemble_generator(coeffs, chi, theta);
                CHECK(max_abs(g.A12) < 1e-12);
                CHECK(max_abs(g.A21) < 1e-12);
            }
        }
    }
}

TEST_CASE("A22 vanishes at theta = pi/2 for chi = 0 and chi = beta") {
    const bath::BathSpec spec;
    for (double t : {0.3, 2.0, 9.0, 40.0}) {
        for (double chi : {0.0, spec.beta}) {
            const auto g = tcl::generator(t, chi, pi / 2, spec);
            CHECK(max_abs(g.A22) < 10.0 * spec.quad_tol);
        }
        // Away from chi in {0, beta} the block is nonzero, decaying with t.
        CHECK(max_abs(tcl::generator(t, 0.5, pi / 2, spec).A22) > 1000.0 * spec.quad_tol);
    }
}

TEST_CASE("A12 and A21 scale with sin(2 theta) / 2") {
    const bath::BathSpec spec;
    const auto a = tcl::generator(4.0, 0.7, pi / 4, spec);
    const auto b = tcl::generator(4.0, 0.7, pi / 8, spec);
    const double ratio = 1.0 / std::sin(pi / 4);
    CHECK(max_abs(a.A12 - ratio * b.A12) < 1e-14);
    CHECK(max_abs(a.A21 - ratio * b.A21) < 1e-14);
}

TEST_CASE("generator is real for real chi") {
    const bath::BathSpec spec;
    for (double chi : {-0.2, 0.0, 0.6, 1.0}) {
        for (double theta : {0.2, pi / 4, 2.0}) {
            const Matrix4c g = tcl::generator(7.0, chi, theta, spec).assembled();
            CHECK(g.imag().cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("transversal coupling relaxes the population towards the Gibbs value") {
    const bath::BathSpec spec;
    const Matrix4c g = tcl::generator(400.0, 0.0, 0.0, spec).assembled();
    // dv_z/dt = G_zz v_z + G_z0 with v_z decoupled from the coherences.
    CHECK(std::abs(g(2, 0)) < 1e-15);
    CHECK(std::abs(g(2, 1)) < 1e-15);
    const double vz_ss = -(g(2, 3) / g(2, 2)).real();
    CHECK(vz_ss == doctest::Approx(-std::tanh(0.5 * spec.beta)).epsilon(1e-4));
}

TEST_CASE("precession entries and the derivative trace row") {
    const bath::BathSpec spec;
    const auto g = tcl::generator(3.0, 0.0, pi / 2, spec);
    CHECK(g.A11(0, 1).real() == doctest::Approx(-tcl::omega0));
    CHECK(g.A11(1, 0).real() == doctest::Approx(tcl::omega0));
    // At pure dephasing the heat derivative acts through the v_0 row.
    const Matrix4c gp = tcl::generator_chi_derivative(3.0, pi / 2, spec);
    CHECK(gp.row(3).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("chi derivative is linear in lambda") {
    bath::BathSpec a, b;
    b.lambda = 2.0 * a.lambda;
    const Matrix4c ga = tcl::generator_chi_derivative(5.0, 0.9, a);
    const Matrix4c gb = tcl::generator_chi_derivative(5.0, 0.9, b);
    CHECK(max_abs(gb - 2.0 * ga) < 1e-11 * max_abs(gb));
}

TEST_CASE("generator is continuous in t") {
    const bath::BathSpec spec;
    const double dt = 1e-3;
    for (double t : {0.5, 5.0, 50.0}) {
        const Matrix4c a = tcl::generator(t, 0.5, 1.0, spec).assembled();
        const Matrix4c b = tcl::generator(t + dt, 0.5, 1.0, spec).assembled();
        // |dG/dt| is bounded by a few times |h(0)| ~ 0.05.
        CHECK(max_abs(a - b) < 0.2 * dt);
    }
}

TEST_CASE("invalid arguments") {
    const bath::BathSpec spec;
    CHECK_THROWS_AS(tcl::generator(1.0, 0.0, -0.1, spec), std::domain_error);
    CHECK_THROWS_AS(tcl::generator(1.0, 0.0, 3.2, spec), std::domain_error);
    CHECK_THROWS_AS(tcl::coefficient_integrals(-1.0, 0.0, spec), std::domain_error);
}
