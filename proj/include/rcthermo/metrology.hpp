#pragma once

#include "rcthermo/operators.hpp"
#include "rcthermo/thermal.hpp"

#include <limits>

namespace rcthermo {

// Fraction of the largest population below which an eigen-direction of rho is
// treated as outside the support (for the SLD and the dephased Fisher
// information alike). Applied per group of basis states linked by nonzero
// coherences; an isolated basis state is in the support whenever its
// population is a positive normal number.
inline constexpr double kSupportCutoff = 1e-12;

// Symmetric logarithmic derivative: the Hermitian L with
// d rho / d beta = (L rho + rho L) / 2 on the support of rho, zero elsewhere.
// Returned in the spin basis.
HermitianMatrix sld(const ProbeState &state);

// || d rho - {L, rho}/2 ||_F / || d rho ||_F (0 when d rho = 0).
double lyapunov_residual(const ProbeState &state, const HermitianMatrix &l);

// F = Tr[L^2 rho].
double qfi(const ProbeState &state, const HermitianMatrix &l);

// F = sum_{p_i + p_j > eps} 2 |<i| d rho |j>|^2 / (p_i + p_j), evaluated in the
// eigenbasis of rho without forming L.
double qfi_spectral(const ProbeState &state);

// T / dT = sqrt(m beta^2 F).
double snr_from_qfi(double beta, double fisher, int repetitions = 1);

// sqrt(N) * 2 delta beta e^{beta delta} / (1 + e^{2 beta delta}): the heat
// capacity bound of N uncoupled spins.
double weak_coupling_snr(int n_spins, double delta, double temperature);

// Zeroes the off-diagonal elements in the spin basis.
ComplexMatrix dephase(const ComplexMatrix &rho);

// sum_{p_k > eps} dp_k^2 / p_k.
double classical_fi_diagonal(const Eigen::VectorXd &p, const Eigen::VectorXd &dp);
// Fisher information of the spin-basis populations of a probe state, with the
// same support rule as the SLD.
double dephased_fi(const ProbeState &state);

// T |chi_T(O)| / dO with chi_T = d<O>/dT = -beta^2 Tr[(d rho / d beta) O].
double observable_snr(const ProbeState &state, const HermitianMatrix &observable);

// sum_k sigma^z_k on the bare probe space.
HermitianMatrix total_polarization(int n_spins);
inline HermitianMatrix total_polarization(const SpaceLayout &space) { return total_polarization(space.n_spins()); }

// sum_{i != j} |rho_ij|.
double coherence_l1(const ComplexMatrix &rho);

struct SchemeSet {
    bool optimal = true;
    bool dephased = true;
    bool polarization = true;
    bool weak_reference = true;
    bool coherence = true;

    static SchemeSet all() { return {}; }
};

// Figures of merit at one temperature. Schemes that were not requested are NaN.
struct SnrReport {
    static constexpr double kNotEvaluated = std::numeric_limits<double>::quiet_NaN();

    double temperature = 0.0;
    double snr_optimal = kNotEvaluated;
    double snr_dephased = kNotEvaluated;
    double snr_polarization = kNotEvaluated;
    double snr_weak_reference = kNotEvaluated;
    double coherence_l1 = kNotEvaluated;
    // Diagnostics, not part of the CSV schema.
    double lyapunov_residual = kNotEvaluated;
    double max_off_diagonal = kNotEvaluated;
};

SnrReport evaluate_snr(const ProbeState &state, int n_spins, double delta, const SchemeSet &schemes = {});

} // namespace rcthermo
