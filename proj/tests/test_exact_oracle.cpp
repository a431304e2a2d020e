#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "landauer/bloch_dynamics.hpp"
#include "landauer/exact_oracle.hpp"

using namespace landauer;
using oracle::OracleConfig;
using oracle::OracleSystem;

namespace {

constexpr double pi = std::numbers::pi;

// Two modes keep the Hilbert space at 50 states; strong coupling makes every
// check sensitive to mistakes in the interaction.
OracleConfig small_config(int n_levels = 5) {
    OracleConfig c;
    c.mode_freqs = {0.8, 1.2};
    c.couplings = {0.04, 0.03};
    c.n_levels = n_levels;
    c.beta = 5.0;
    c.theta = 0.7;
    c.bloch = Eigen::Vector3d(0.3, -0.2, 0.5);
    return c;
}

double hermiticity_defect(const Eigen::MatrixXcd& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("cumulant generating function vanishes at chi = 0 and at t = 0") {
    const OracleSystem sys(small_config());
    for (double t : {0.0, 1.0, 7.5, 40.0}) CHECK(std::abs(sys.cgf(0.0, t)) < 1e-13);
    for (double chi : {-0.5, 1.0, 5.0}) CHECK(std::abs(sys.cgf(chi, 0.0)) < 1e-12);
    CHECK(std::abs(sys.heat(0.0)) < 1e-13);
}

TEST_CASE("configuration is validated") {
    auto c = small_config();
    c.beta = 1.0;
    CHECK_THROWS_AS(OracleSystem{c}, oracle::TruncationError);
    try {
        OracleSystem{c};
    } catch (const oracle::TruncationError& e) {
        CHECK(e.occupation() > 1e-6);
    }
    c = small_config();
    c.couplings = {0.1};
    CHECK_THROWS_AS(OracleSystem{c}, std::invalid_argument);
    c = small_config();
    c.bloch = Eigen::Vector3d(1.0, 1.0, 0.0);
    CHECK_THROWS_AS(OracleSystem{c}, std::domain_error);
    CHECK(oracle::truncation_occupation({0.6}, 5, 5.0) ==
          doctest::Approx((1.0 - std::exp(-3.0)) * std::exp(-15.0)));
}

TEST_CASE("window couplings integrate the spectral density") {
    const bath::BathSpec spec;
    const std::vector<double> freqs{0.6, 0.9, 1.1, 1.4};
    const auto g = oracle::window_couplings(spec, freqs);
    REQUIRE(g.size() == 4);
    double total = 0.0;
    for (double gk : g) total += gk * gk;
    // Primitive of lambda w e^{-w/Omega} is -lambda Omega (w + Omega) e^{-w/Omega}.
    auto primitive = [&](double w) { return -spec.lambda * spec.omega_c * (w + spec.omega_c) * std::exp(-w / spec.omega_c); };
    CHECK(total == doctest::Approx(primitive(1.55) - primitive(0.45)).epsilon(1e-13));
    CHECK(g[0] * g[0] == doctest::Approx(primitive(0.75) - primitive(0.45)).epsilon(1e-13));
    CHECK_THROWS_AS(oracle::window_couplings(spec, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(oracle::window_couplings(spec, {1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("time-evolved state is a density matrix") {
    const OracleSystem sys(small_config());
    for (double t : {0.0, 3.0, 25.0}) {
        const auto rho = sys.state(t);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
        CHECK(hermiticity_defect(rho) < 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
    }
}

TEST_CASE("Landauer equality holds exactly with non-negative information terms") {
    const OracleSystem sys(small_config());
    const auto start = sys.landauer_equality(0.0);
    CHECK(std::abs(start.beta_heat) < 1e-12);
    CHECK(std::abs(start.mutual_info) < 1e-12);
    CHECK(std::abs(start.rel_entropy) < 1e-12);
    for (double t : {0.5, 4.0, 12.0, 60.0}) {
        const auto r = sys.landauer_equality(t);
        CAPTURE(t);
        CHECK(std::abs(r.residual) < 1e-10);
        CHECK(r.mutual_info > -1e-12);
        CHECK(r.rel_entropy > -1e-12);
        CHECK(r.beta_heat >= r.entropy_change - 1e-10);
    }
}

TEST_CASE("heat is minus the chi derivative of the generating function") {
    const OracleSystem sys(small_config());
    const double d = 1e-4;
    for (double t : {1.0, 6.0, 30.0}) {
        const double fd = -(sys.cgf(d, t) - sys.cgf(-d, t)).real() / (2.0 * d);
        CHECK(std::abs(fd - sys.heat(t)) < 1e-8 * std::max(1.0, std::abs(sys.heat(t))) + 1e-10);
    }
}

TEST_CASE("Theta at chi = beta is real and obeys Jensen") {
    const OracleSystem sys(small_config());
    const double beta = sys.config().beta;
    for (double t : {2.0, 9.0, 50.0}) {
        const auto theta_beta = sys.cgf(beta, t);
        CHECK(std::abs(theta_beta.imag()) < 1e-12);
        CHECK(sys.heat(t) >= -theta_beta.real() / beta - 1e-12);
    }
}

TEST_CASE("vectorized and scalar evaluation agree") {
    const OracleSystem sys(small_config());
    const std::vector<double> times{0.5, 2.0, 8.0};
    const auto cgfs = sys.cgf(1.3, times);
    const auto heats = sys.heat(times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(std::abs(cgfs[i] - sys.cgf(1.3, times[i])) < 1e-14);
        CHECK(heats[i] == doctest::Approx(sys.heat(times[i])).epsilon(1e-14));
    }
}

TEST_CASE("truncation error shrinks with the number of levels") {
    // The strong test coupling excites the modes dynamically, so the error is
    // set by the interaction rather than by the thermal tail.
    const OracleSystem reference(small_config(9));
    std::vector<OracleSystem> systems;
    for (int n = 5; n <= 7; ++n) systems.emplace_back(small_config(n));
    for (double t : {1.0, 10.0, 40.0}) {
        CAPTURE(t);
        std::vector<double> err_heat, err_cgf;
        for (const auto& sys : systems) {
            err_heat.push_back(std::abs(sys.heat(t) - reference.heat(t)));
            err_cgf.push_back(std::abs(sys.cgf(2.0, t) - reference.cgf(2.0, t)));
        }
        // Below ~1e-10 the differences are eigensolver round-off, not truncation.
        for (std::size_t i = 0; i + 1 < systems.size(); ++i) {
            CHECK((err_heat[i + 1] < err_heat[i] || err_heat[i] < 1e-10));
            CHECK((err_cgf[i + 1] < err_cgf[i] || err_cgf[i] < 1e-10));
        }
        CHECK(err_heat.back() < 1e-8);
        CHECK(err_cgf.back() < 1e-8);
    }
}

TEST_CASE("tilted-interaction and tilted-field forms agree") {
    auto c = small_config();
    const std::vector<double> times{0.7, 5.0, 20.0};
    for (double theta : {0.0, pi / 6, pi / 4, pi / 2, 2.0}) {
        c.theta = theta;
        CAPTURE(theta);
        CHECK(oracle::tilted_field_equivalence(c, std::vector<double>{0.0, 2.5, 5.0}, times) < 1e-10);
    }
}

TEST_CASE("reservoir correlators match the discrete-mode kernels") {
    const std::vector<double> taus{0.0, 0.4, 3.0, 17.0};
    const std::vector<double> chis{-0.5, 0.0, 2.5, 5.0};
    CHECK(oracle::certify_kernels(small_config(7), taus, chis) < 1e-8);

    auto c = OracleConfig{};
    c.n_levels = 8;
    CHECK(oracle::certify_kernels(c, taus, chis) < 1e-8);
}

TEST_CASE("second-order dynamics follows the exact heat at short times") {
    OracleConfig c;
    c.bloch = Eigen::Vector3d(0.0, 0.0, 0.0);
    const OracleSystem sys(c);
    const auto& cfg = sys.config();
    const bath::DiscreteModeKernels kernels(cfg.mode_freqs, cfg.couplings, cfg.beta);
    dynamics::PropagationOptions opt;
    opt.t_max = 5.0;
    const auto traj = dynamics::propagate_with_heat(cfg.bloch, cfg.theta, kernels, opt);
    const double exact = sys.heat(5.0);
    const double approx = traj.heat(traj.size() - 1).q().real();
    CHECK(exact > 0.0);
    CHECK(std::abs(approx - exact) <= 0.2 * std::abs(exact));
}
