#include "landauer/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "landauer/tcl_generator.hpp"

namespace landauer::oracle {

namespace {

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

template <class Values>
double entropy_of_spectrum(const Values& eigenvalues) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) s -= xlogx(eigenvalues[i]);
    return s;
}

double entropy(const Eigen::MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    return entropy_of_spectrum(es.eigenvalues());
}

Eigen::Matrix2cd bloch_to_density(const Eigen::Vector3d& v) {
    Eigen::Matrix2cd rho;
    rho << cplx(0.5 * (1.0 + v[2])), cplx(0.5 * v[0], -0.5 * v[1]),
           cplx(0.5 * v[0], 0.5 * v[1]), cplx(0.5 * (1.0 - v[2]));
    return rho;
}

OracleConfig validated(OracleConfig c) {
    if (c.mode_freqs.empty()) throw std::invalid_argument("oracle: at least one mode is required");
    for (double w : c.mode_freqs) {
        if (!(w > 0.0)) throw std::invalid_argument("oracle: mode frequencies must be positive");
    }
    if (c.n_levels < 2) throw std::invalid_argument("oracle: n_levels must be at least 2");
    if (!(c.beta > 0.0)) throw std::invalid_argument("oracle: beta must be positive");
    if (c.bloch.norm() > 1.0 + 1e-12) throw std::domain_error("oracle: initial |v| > 1");
    tcl::check_theta(c.theta);
    if (c.couplings.empty()) c.couplings = window_couplings(bath::BathSpec{}, c.mode_freqs);
    if (c.couplings.size() != c.mode_freqs.size()) {
        throw std::invalid_argument("oracle: one coupling per mode is required");
    }
    const double occ = truncation_occupation(c.mode_freqs, c.n_levels, c.beta);
    if (occ >= c.truncation_tol) {
        std::ostringstream msg;
        msg << "oracle: thermal occupation of the first truncated level is " << occ
            << " (limit " << c.truncation_tol << "); raise beta or n_levels";
        throw TruncationError(msg.str(), occ);
    }
    return c;
}

} // namespace

std::vector<double> window_couplings(const bath::BathSpec& spec, const std::vector<double>& freqs) {
    spec.validate();
    if (freqs.size() < 2) throw std::invalid_argument("window_couplings: need at least two modes");
    if (!std::is_sorted(freqs.begin(), freqs.end())) {
        throw std::invalid_argument("window_couplings: frequencies must be ascending");
    }
    const double wc = spec.omega_c;
    // Antiderivative of lambda w e^{-w/wc}.
    auto primitive = [&](double w) { return -spec.lambda * wc * (w + wc) * std::exp(-w / wc); };

    const std::size_t n = freqs.size();
    std::vector<double> edges(n + 1);
    edges[0] = freqs[0] - 0.5 * (freqs[1] - freqs[0]);
    edges[n] = freqs[n - 1] + 0.5 * (freqs[n - 1] - freqs[n - 2]);
    for (std::size_t k = 1; k < n; ++k) edges[k] = 0.5 * (freqs[k - 1] + freqs[k]);
    if (edges[0] < 0.0) edges[0] = 0.0;

    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = std::sqrt(primitive(edges[k + 1]) - primitive(edges[k]));
    return g;
}

double truncation_occupation(const std::vector<double>& freqs, int n_levels, double beta) {
    double worst = 0.0;
    for (double w : freqs) {
        const double x = beta * w;
        worst = std::max(worst, -std::expm1(-x) * std::exp(-x * n_levels));
    }
    return worst;
}

TruncatedReservoir::TruncatedReservoir(const std::vector<double>& freqs,
                                       const std::vector<double>& couplings, int n_levels,
                                       double beta)
    : beta_(beta) {
    if (freqs.size() != couplings.size() || freqs.empty()) {
        throw std::invalid_argument("TruncatedReservoir: one coupling per mode is required");
    }
    if (n_levels < 2) throw std::invalid_argument("TruncatedReservoir: n_levels must be at least 2");
    const int modes = static_cast<int>(freqs.size());
    int r_dim = 1;
    for (int k = 0; k < modes; ++k) r_dim *= n_levels;

    energy_ = Eigen::VectorXd::Zero(r_dim);
    std::vector<Eigen::Triplet<double>> entries;
    for (int r = 0; r < r_dim; ++r) {
        int rest = r;
        int stride = 1;
        for (int k = 0; k < modes; ++k) {
            const int n = rest % n_levels;
            rest /= n_levels;
            energy_[r] += n * freqs[k];
            if (n + 1 < n_levels) {
                const double element = couplings[k] * std::sqrt(n + 1.0);
                entries.emplace_back(r, r + stride, element);
                entries.emplace_back(r + stride, r, element);
            }
            stride *= n_levels;
        }
    }
    coupling_.resize(r_dim, r_dim);
    coupling_.setFromTriplets(entries.begin(), entries.end());
    // Shifted by the ground energy 0, so no overflow for any beta.
    population_ = (-beta * energy_.array()).exp();
    population_ /= population_.sum();
}

bath::Correlators TruncatedReservoir::correlators(double tau, double chi) const {
    // Tr[rho X Y] = sum_ij p_i X_ij Y_ji; every operator here is B with
    // diagonal factors attached, so only the nonzeros of B contribute.
    cplx same{};
    cplx cross{};
    for (int j = 0; j < coupling_.outerSize(); ++j) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(coupling_, j); it; ++it) {
            const int i = static_cast<int>(it.row());
            const double de = energy_[i] - energy_[j];
            const double b2 = it.value() * it.value();
            // X = B^(-chi):          X_ij = e^{+chi de/2} B_ij
            // Y = B^(chi)(-tau):     Y_ji = e^{-i tau (e_j - e_i)} e^{-chi (e_j - e_i)/2} B_ji
            const cplx phase = std::exp(cplx(0.0, tau * de));
            same += population_[i] * b2 * phase;
            cross += population_[i] * (std::exp(0.5 * chi * de) * it.value()) *
                     (phase * std::exp(0.5 * chi * de) * it.value());
        }
    }
    return {same, cross};
}

cplx TruncatedReservoir::cross_derivative(double tau) const {
    cplx out{};
    for (int j = 0; j < coupling_.outerSize(); ++j) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(coupling_, j); it; ++it) {
            const int i = static_cast<int>(it.row());
            const double de = energy_[i] - energy_[j];
            out -= population_[i] * it.value() * it.value() * de * std::exp(cplx(0.0, tau * de));
        }
    }
    return out;
}

OracleSystem::OracleSystem(OracleConfig config)
    : config_(validated(std::move(config))),
      reservoir_(config_.mode_freqs, config_.couplings, config_.n_levels, config_.beta) {
    const int r_dim = reservoir_.dim();
    const double c = std::cos(config_.theta);
    const double s = std::sin(config_.theta);
    const double w0 = tcl::omega0;
    Eigen::Matrix2d h_s, s_op;
    rho_s0_ = bloch_to_density(config_.bloch);
    if (config_.form == CouplingForm::tilted_interaction) {
        h_s << 0.5 * w0, 0.0, 0.0, -0.5 * w0;
        s_op << s, c, c, -s;
    } else {
        h_s << 0.5 * w0 * c, 0.5 * w0 * s, 0.5 * w0 * s, -0.5 * w0 * c;
        s_op << 0.0, 1.0, 1.0, 0.0;
        const double ch = std::cos(0.5 * config_.theta);
        const double sh = std::sin(0.5 * config_.theta);
        Eigen::Matrix2cd u;
        u << ch, sh, -sh, ch;
        rho_s0_ = u.adjoint() * rho_s0_ * u;
    }

    const Eigen::MatrixXd b = Eigen::MatrixXd(reservoir_.coupling());
    const int d = 2 * r_dim;
    hamiltonian_ = Eigen::MatrixXd::Zero(d, d);
    for (int a = 0; a < 2; ++a) {
        for (int bb = 0; bb < 2; ++bb) {
            auto block = hamiltonian_.block(a * r_dim, bb * r_dim, r_dim, r_dim);
            block = s_op(a, bb) * b;
            block.diagonal().array() += h_s(a, bb);
            if (a == bb) block.diagonal() += reservoir_.energies();
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian_);
    if (es.info() != Eigen::Success) throw std::runtime_error("oracle: eigendecomposition failed");
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
}

Eigen::MatrixXd OracleSystem::observable_in_eigenbasis(const Eigen::VectorXd& n_diag) const {
    const int r = reservoir_dim();
    const auto v0 = eigenvectors_.topRows(r);
    const auto v1 = eigenvectors_.bottomRows(r);
    return v0.transpose() * n_diag.asDiagonal() * v0 + v1.transpose() * n_diag.asDiagonal() * v1;
}

Eigen::MatrixXcd OracleSystem::state_in_eigenbasis(const Eigen::VectorXd& m_diag) const {
    const int r = reservoir_dim();
    const auto v0 = eigenvectors_.topRows(r);
    const auto v1 = eigenvectors_.bottomRows(r);
    const Eigen::MatrixXd p00 = v0.transpose() * m_diag.asDiagonal() * v0;
    const Eigen::MatrixXd p11 = v1.transpose() * m_diag.asDiagonal() * v1;
    const Eigen::MatrixXd p01 = v0.transpose() * m_diag.asDiagonal() * v1;
    return rho_s0_(0, 0) * p00.cast<cplx>() + rho_s0_(1, 1) * p11.cast<cplx>() +
           rho_s0_(0, 1) * p01.cast<cplx>() + rho_s0_(1, 0) * p01.transpose().cast<cplx>();
}

cplx OracleSystem::evolve_trace(const Eigen::MatrixXcd& overlap, double t) const {
    // sum_jk N_kj M_jk e^{-i (E_j - E_k) t}, N symmetric
    const Eigen::VectorXcd z = (cplx(0.0, -t) * eigenvalues_.cast<cplx>()).array().exp();
    return z.transpose() * overlap * z.conjugate();
}

cplx OracleSystem::cgf(double chi, double t) const { return cgf(chi, std::vector<double>{t}).front(); }

std::vector<cplx> OracleSystem::cgf(double chi, const std::vector<double>& times) const {
    const Eigen::ArrayXd e = reservoir_.energies().array();
    const Eigen::VectorXd n_diag = (-chi * e).exp();
    const Eigen::VectorXd m_diag = reservoir_.populations().array() * (chi * e).exp();
    const Eigen::MatrixXcd overlap =
        state_in_eigenbasis(m_diag).cwiseProduct(observable_in_eigenbasis(n_diag).cast<cplx>());
    std::vector<cplx> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(std::log(evolve_trace(overlap, t)));
    return out;
}

double OracleSystem::heat(double t) const { return heat(std::vector<double>{t}).front(); }

std::vector<double> OracleSystem::heat(const std::vector<double>& times) const {
    const Eigen::VectorXd& e = reservoir_.energies();
    const Eigen::VectorXd& p = reservoir_.populations();
    const Eigen::MatrixXcd overlap =
        state_in_eigenbasis(p).cwiseProduct(observable_in_eigenbasis(e).cast<cplx>());
    const double e0 = p.dot(e);
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(evolve_trace(overlap, t).real() - e0);
    return out;
}

Eigen::MatrixXcd OracleSystem::state(double t) const {
    const Eigen::MatrixXcd initial = state_in_eigenbasis(reservoir_.populations());
    const Eigen::VectorXcd z = (cplx(0.0, -t) * eigenvalues_.cast<cplx>()).array().exp();
    const Eigen::MatrixXcd x = z.asDiagonal() * initial * z.conjugate().asDiagonal();
    Eigen::MatrixXcd rho(dim(), dim());
    rho.real() = eigenvectors_ * x.real() * eigenvectors_.transpose();
    rho.imag() = eigenvectors_ * x.imag() * eigenvectors_.transpose();
    return rho;
}

LandauerRecord OracleSystem::landauer_equality(double t) const {
    const int r = reservoir_dim();
    const Eigen::MatrixXcd rho = state(t);

    Eigen::Matrix2cd rho_s;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) rho_s(a, b) = rho.block(a * r, b * r, r, r).trace();
    }
    const Eigen::MatrixXcd rho_r = rho.topLeftCorner(r, r) + rho.bottomRightCorner(r, r);

    const double s_sys0 = entropy(rho_s0_);
    const double s_sys = entropy(rho_s);
    const double s_res = entropy(rho_r);
    const double s_total = entropy(rho);

    const Eigen::VectorXd& e = reservoir_.energies();
    const double log_z = std::log((-config_.beta * e.array()).exp().sum());
    const Eigen::VectorXd pop_t = rho_r.diagonal().real();
    const double energy_gain = pop_t.dot(e) - reservoir_.populations().dot(e);
    // -Tr[rho_R(t) ln rho_R(0)] with ln rho_R(0) = -beta H_R - ln Z.
    const double cross_entropy = config_.beta * pop_t.dot(e) + log_z * pop_t.sum();

    LandauerRecord rec;
    rec.t = t;
    rec.beta_heat = config_.beta * energy_gain;
    rec.entropy_change = s_sys0 - s_sys;
    rec.mutual_info = s_sys + s_res - s_total;
    rec.rel_entropy = cross_entropy - s_res;
    rec.residual = rec.beta_heat - rec.entropy_change - rec.mutual_info - rec.rel_entropy;
    return rec;
}

double tilted_field_equivalence(const OracleConfig& config, double chi,
                                const std::vector<double>& times) {
    return tilted_field_equivalence(config, std::vector<double>{chi}, times);
}

double tilted_field_equivalence(const OracleConfig& config, const std::vector<double>& chis,
                                const std::vector<double>& times) {
    OracleConfig original = config;
    original.form = CouplingForm::tilted_interaction;
    OracleConfig rotated = config;
    rotated.form = CouplingForm::tilted_field;
    const OracleSystem a(original);
    const OracleSystem b(rotated);
    double worst = 0.0;
    for (double chi : chis) {
        const auto ta = a.cgf(chi, times);
        const auto tb = b.cgf(chi, times);
        for (std::size_t i = 0; i < times.size(); ++i) worst = std::max(worst, std::abs(ta[i] - tb[i]));
    }
    return worst;
}

double certify_kernels(const OracleConfig& config, const std::vector<double>& taus,
                       const std::vector<double>& chis) {
    const OracleConfig cfg = validated(config);
    const TruncatedReservoir reservoir(cfg.mode_freqs, cfg.couplings, cfg.n_levels, cfg.beta);
    const bath::DiscreteModeKernels analytic(cfg.mode_freqs, cfg.couplings, cfg.beta);
    double worst = 0.0;
    for (double tau : taus) {
        for (double chi : chis) {
            const auto exact = reservoir.correlators(tau, chi);
            const auto model = analytic.correlators(tau, chi);
            worst = std::max({worst, std::abs(exact.same - model.same),
                              std::abs(exact.cross - model.cross)});
        }
        worst = std::max(worst, std::abs(reservoir.cross_derivative(tau) -
                                         analytic.cross_derivative(tau)));
    }
    return worst;
}

} // namespace landauer::oracle
