// exact_oracle.hpp: Brute-force two-point-measurement statistics for a spin
// coupled to a few truncated bosonic modes.
//
// H = (omega0/2) sigma_z + sum_k w_k b_k^+ b_k + (cos(theta) sigma_x + sin(theta) sigma_z) x B,
// B = sum_k g_k (b_k + b_k^+). Each mode keeps the Fock levels 0 .. n_levels-1 and
// the reservoir starts in the Gibbs state of the truncated H_R.
//
// Theta(chi, t) = ln Tr[e^{-chi H_R} U(t) (rho_S x rho_R e^{chi H_R}) U(t)^+]
// so that <dQ> = -dTheta/dchi at chi = 0 and B_T = -Theta(beta, t)/beta.
// All time evolution goes through one eigendecomposition of H.

#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "landauer/bath_correlation.hpp"

namespace landauer::oracle {

using cplx = std::complex<double>;

enum class CouplingForm {
    tilted_interaction,  // model as written above
    tilted_field,        // rotated frame: H_S along (sin, 0, cos), coupling sigma_x x B
};

struct OracleConfig {
    std::vector<double> mode_freqs{0.6, 0.9, 1.1, 1.4};
    std::vector<double> couplings;  // amplitudes g_k; empty: window_couplings of the default bath
    int n_levels{5};
    double beta{5.0};
    double theta{0.785398163397448};
    Eigen::Vector3d bloch{0.0, 0.0, 0.0};
    CouplingForm form{CouplingForm::tilted_interaction};
    double truncation_tol{1e-6};
};

class TruncationError : public std::domain_error {
public:
    TruncationError(const std::string& what, double occupation)
        : std::domain_error(what), occupation_(occupation) {}
    double occupation() const { return occupation_; }

private:
    double occupation_;
};

// Mode amplitudes with g_k^2 = integral of J over the window around w_k. Windows split at the
// midpoints between neighbouring frequencies; the outer edges sit half a
// spacing beyond the first and last mode.
std::vector<double> window_couplings(const bath::BathSpec& spec, const std::vector<double>& freqs);

// Untruncated thermal population of level n_levels, maximized over modes.
double truncation_occupation(const std::vector<double>& freqs, int n_levels, double beta);

// Truncated bosonic modes in the Gibbs state of H_R. H_R is diagonal in the
// Fock basis r = sum_k n_k levels^k, and B has at most two entries per mode and row.
class TruncatedReservoir {
public:
    TruncatedReservoir(const std::vector<double>& freqs, const std::vector<double>& couplings,
                       int n_levels, double beta);

    int dim() const { return static_cast<int>(energy_.size()); }
    const Eigen::VectorXd& energies() const { return energy_; }
    const Eigen::VectorXd& populations() const { return population_; }
    const Eigen::SparseMatrix<double>& coupling() const { return coupling_; }
    double beta() const { return beta_; }

    // <B^(-chi) B^(chi)(-tau)> (cross) and <B B(-tau)> (same), with
    // B^(chi) = e^{-chi H_R/2} B e^{chi H_R/2} and B(-tau) = e^{-i H_R tau} B e^{i H_R tau}.
    bath::Correlators correlators(double tau, double chi) const;
    // d cross / d(-chi) at chi = 0.
    cplx cross_derivative(double tau) const;

private:
    Eigen::VectorXd energy_;
    Eigen::VectorXd population_;
    Eigen::SparseMatrix<double> coupling_;
    double beta_;
};

struct LandauerRecord {
    double t{0.0};
    double beta_heat{0.0};    // beta <dQ>
    double entropy_change{0.0};  // S(rho_S(0)) - S(rho_S(t))
    double mutual_info{0.0};
    double rel_entropy{0.0};  // D(rho_R(t) || rho_R(0))
    double residual{0.0};     // beta_heat - entropy_change - mutual_info - rel_entropy
};

class OracleSystem {
public:
    explicit OracleSystem(OracleConfig config);

    const OracleConfig& config() const { return config_; }
    const TruncatedReservoir& reservoir() const { return reservoir_; }
    int reservoir_dim() const { return reservoir_.dim(); }
    int dim() const { return 2 * reservoir_dim(); }
    const Eigen::MatrixXd& hamiltonian() const { return hamiltonian_; }
    const Eigen::Matrix2cd& initial_system_state() const { return rho_s0_; }

    cplx cgf(double chi, double t) const;
    std::vector<cplx> cgf(double chi, const std::vector<double>& times) const;

    // Mean reservoir energy gain Tr[H_R (rho_R(t) - rho_R(0))].
    double heat(double t) const;
    std::vector<double> heat(const std::vector<double>& times) const;

    // Full density matrix, system index major.
    Eigen::MatrixXcd state(double t) const;
    LandauerRecord landauer_equality(double t) const;

private:
    // (1 x N) and (rho_S0 x M) in the eigenbasis of H, for diagonal N, M on R.
    Eigen::MatrixXd observable_in_eigenbasis(const Eigen::VectorXd& n_diag) const;
    Eigen::MatrixXcd state_in_eigenbasis(const Eigen::VectorXd& m_diag) const;
    // Tr[N U(t) M U(t)^+] from the elementwise product of the two above.
    cplx evolve_trace(const Eigen::MatrixXcd& overlap, double t) const;

    OracleConfig config_;
    TruncatedReservoir reservoir_;
    Eigen::Matrix2cd rho_s0_;
    Eigen::MatrixXd hamiltonian_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
};

// max over times of |Theta_interaction(chi, t) - Theta_field(chi, t)| for the
// same physical setup written in both frames.
double tilted_field_equivalence(const OracleConfig& config, double chi,
                                const std::vector<double>& times);

double tilted_field_equivalence(const OracleConfig& config, const std::vector<double>& chis,
                                const std::vector<double>& times);

// max deviation between the analytic discrete-mode kernels (same, cross and
// the chi-derivative of cross) and the operator expectations on the
// truncated reservoir of the given configuration, over all (tau, chi) pairs.
double certify_kernels(const OracleConfig& config, const std::vector<double>& taus,
                       const std::vector<double>& chis);

} // namespace landauer::oracle
