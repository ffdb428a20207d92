#include "rcthermo/metrology.hpp"

#include "rcthermo/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace rcthermo {

namespace {

constexpr double kHermiticityTolerance = 1e-10;
constexpr double kNegativityTolerance = 1e-12;

void require_probe_state(const ProbeState &state) {
    const auto &rho = state.rho;
    const auto &drho = state.drho_dbeta;
    if (rho.rows() != rho.cols() || rho.rows() == 0 || drho.rows() != rho.rows() || drho.cols() != rho.cols())
        throw DomainError("probe state matrices must be square and of equal dimension");
    if (hermiticity_residual(rho) > kHermiticityTolerance)
        throw DomainError("probe state rho is not Hermitian");
    if (hermiticity_residual(drho) > kHermiticityTolerance)
        throw DomainError("probe state d rho / d beta is not Hermitian");
}

// rho and d rho / d beta split into the groups of basis states that are linked
// by a nonzero off-diagonal element of either matrix. Each group is
// diagonalized on its own, so symmetry-forbidden elements never mix sectors
// and the support cutoff is relative to the largest population of the group.
// Isolated basis states are exact: their population is a sum of non-negative
// Gibbs terms and keeps full relative precision however small it is.
struct StateBlock {
    std::vector<Index> members;
    Eigen::VectorXd p;
    ComplexMatrix basis;
    ComplexMatrix d; // d rho / d beta in the block eigenbasis
    double cutoff = 0.0;
};

std::vector<std::vector<Index>> linked_groups(const ComplexMatrix &rho, const ComplexMatrix &drho) {
    const Index n = rho.rows();
    Eigen::VectorX<Index> parent = Eigen::VectorX<Index>::LinSpaced(n, 0, n - 1);
    auto root = [&](Index i) {
        while (parent(i) != i)
            i = parent(i) = parent(parent(i));
        return i;
    };
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < j; ++i)
            if (rho(i, j) != 0.0 || drho(i, j) != 0.0)
                parent(root(i)) = root(j);
    std::vector<std::vector<Index>> groups;
    Eigen::VectorX<Index> slot = Eigen::VectorX<Index>::Constant(n, -1);
    for (Index i = 0; i < n; ++i) {
        Index &s = slot(root(i));
        if (s < 0) {
            s = static_cast<Index>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(s)].push_back(i);
    }
    return groups;
}

std::vector<StateBlock> diagonalize_state(const ProbeState &state) {
    std::vector<StateBlock> blocks;
    for (auto &members : linked_groups(state.rho, state.drho_dbeta)) {
        const auto m = static_cast<Index>(members.size());
        ComplexMatrix r(m, m), dr(m, m);
        for (Index j = 0; j < m; ++j)
            for (Index i = 0; i < m; ++i) {
                r(i, j) = state.rho(members[i], members[j]);
                dr(i, j) = state.drho_dbeta(members[i], members[j]);
            }
        StateBlock b;
        b.members = std::move(members);
        if (m == 1) {
            b.p = Eigen::VectorXd::Constant(1, r(0, 0).real());
            b.basis = ComplexMatrix::Identity(1, 1);
            b.d = dr;
        } else {
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(r);
            if (solver.info() != Eigen::Success)
                throw NumericalError("failed to diagonalize the probe state");
            b.p = solver.eigenvalues();
            b.basis = solver.eigenvectors();
            b.d = b.basis.adjoint() * dr * b.basis;
        }
        for (Index i = 0; i < b.p.size(); ++i) {
            if (b.p(i) < -kNegativityTolerance)
                throw NumericalError("probe state has eigenvalue " + std::to_string(b.p(i)) +
                                     " below the roundoff tolerance; truncation is not converged");
            if (b.p(i) < 0.0)
                b.p(i) = 0.0;
        }
        b.cutoff = std::max(kSupportCutoff * b.p.maxCoeff(), std::numeric_limits<double>::min());
        blocks.push_back(std::move(b));
    }
    return blocks;
}

} // namespace

HermitianMatrix sld(const ProbeState &state) {
    require_probe_state(state);
    const Index n = state.rho.rows();
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto &b : diagonalize_state(state)) {
        const Index m = b.p.size();
        ComplexMatrix l = ComplexMatrix::Zero(m, m);
        for (Index j = 0; j < m; ++j)
            for (Index i = 0; i < m; ++i) {
                const double denom = b.p(i) + b.p(j);
                if (denom > b.cutoff)
                    l(i, j) = 2.0 * b.d(i, j) / denom;
            }
        const ComplexMatrix lb = b.basis * l * b.basis.adjoint();
        for (Index j = 0; j < m; ++j)
            for (Index i = 0; i < m; ++i)
                out(b.members[i], b.members[j]) = lb(i, j);
    }
    return 0.5 * (out + out.adjoint());
}

double lyapunov_residual(const ProbeState &state, const HermitianMatrix &l) {
    const double scale = state.drho_dbeta.norm();
    const ComplexMatrix r = state.drho_dbeta - 0.5 * (l * state.rho + state.rho * l);
    if (scale == 0.0)
        return r.norm();
    return r.norm() / scale;
}

double qfi(const ProbeState &state, const HermitianMatrix &l) {
    if (l.rows() != state.rho.rows() || l.cols() != state.rho.cols())
        throw DomainError("qfi: SLD dimension does not match the state");
    const double f = (l * l * state.rho).trace().real();
    return f > 0.0 ? f : 0.0;
}

double qfi_spectral(const ProbeState &state) {
    require_probe_state(state);
    double f = 0.0;
    for (const auto &b : diagonalize_state(state))
        for (Index j = 0; j < b.p.size(); ++j)
            for (Index i = 0; i < b.p.size(); ++i) {
                const double denom = b.p(i) + b.p(j);
                if (denom > b.cutoff)
                    f += 2.0 * std::norm(b.d(i, j)) / denom;
            }
    return f;
}

double dephased_fi(const ProbeState &state) {
    require_probe_state(state);
    const Eigen::VectorXd p = state.rho.diagonal().real();
    const Eigen::VectorXd dp = state.drho_dbeta.diagonal().real();
    if (p.minCoeff() < -kNegativityTolerance)
        throw NumericalError("dephased_fi: negative population " + std::to_string(p.minCoeff()));
    double f = 0.0;
    for (const auto &members : linked_groups(state.rho, state.drho_dbeta)) {
        double top = 0.0;
        for (Index k : members)
            top = std::max(top, p(k));
        const double cutoff = std::max(kSupportCutoff * top, std::numeric_limits<double>::min());
        for (Index k : members)
            if (p(k) > cutoff)
                f += dp(k) * dp(k) / p(k);
    }
    return f;
}

double snr_from_qfi(double beta, double fisher, int repetitions) {
    if (repetitions < 1)
        throw DomainError("snr_from_qfi: repetitions must be >= 1");
    if (!(fisher >= 0.0))
        throw DomainError("snr_from_qfi: Fisher information must be non-negative");
    return std::sqrt(static_cast<double>(repetitions) * beta * beta * fisher);
}

double weak_coupling_snr(int n_spins, double delta, double temperature) {
    if (!(temperature > 0.0))
        throw DomainError("weak_coupling_snr: temperature must be positive");
    if (n_spins < 1)
        throw DomainError("weak_coupling_snr: n_spins must be >= 1");
    // 2 x e^x / (1 + e^{2x}) rewritten with e^{-x} so large x does not overflow.
    const double x = delta / temperature;
    const double e = std::exp(-std::abs(x));
    return std::sqrt(static_cast<double>(n_spins)) * 2.0 * std::abs(x) * e / (1.0 + e * e);
}

ComplexMatrix dephase(const ComplexMatrix &rho) {
    if (rho.rows() != rho.cols())
        throw DomainError("dephase: matrix must be square");
    return rho.diagonal().asDiagonal();
}

double classical_fi_diagonal(const Eigen::VectorXd &p, const Eigen::VectorXd &dp) {
    if (p.size() != dp.size() || p.size() == 0)
        throw DomainError("classical_fi_diagonal: size mismatch");
    if (p.minCoeff() < -kNegativityTolerance)
        throw DomainError("classical_fi_diagonal: negative probability " + std::to_string(p.minCoeff()));
    const double cutoff = kSupportCutoff * p.maxCoeff();
    double f = 0.0;
    for (Index k = 0; k < p.size(); ++k)
        if (p(k) > cutoff)
            f += dp(k) * dp(k) / p(k);
    return f;
}

double observable_snr(const ProbeState &state, const HermitianMatrix &observable) {
    if (observable.rows() != state.rho.rows() || observable.cols() != state.rho.cols())
        throw DomainError("observable_snr: observable dimension does not match the probe state");
    if (!is_hermitian(observable, kHermiticityTolerance))
        throw DomainError("observable_snr: observable is not Hermitian");
    if (!(state.beta > 0.0))
        throw DomainError("observable_snr: beta must be positive");
    const double beta = state.beta;
    // Centred observable: <O^2> - <O>^2 cancels catastrophically when the state
    // is nearly an eigenstate of O.
    const double mean = (state.rho * observable).trace().real();
    const ComplexMatrix centred = observable - mean * ComplexMatrix::Identity(observable.rows(), observable.cols());
    const double chi = -beta * beta * (state.drho_dbeta * centred).trace().real();
    const double variance = (state.rho * centred * centred).trace().real();
    const double spread = variance > 0.0 ? std::sqrt(variance) : 0.0;
    constexpr double tiny = 1e-14;
    if (spread <= tiny) {
        if (std::abs(chi) <= tiny)
            return 0.0;
        throw NumericalError("observable_snr: variance vanishes while the susceptibility does not");
    }
    return std::abs(chi) / (beta * spread);
}

HermitianMatrix total_polarization(int n_spins) {
    if (n_spins < 1)
        throw DomainError("total_polarization: n_spins must be >= 1");
    const Index dim = Index{1} << n_spins;
    HermitianMatrix o = HermitianMatrix::Zero(dim, dim);
    for (int k = 0; k < n_spins; ++k)
        o += probe_spin_operator(n_spins, k, Axis::Z);
    return o;
}

double coherence_l1(const ComplexMatrix &rho) {
    if (rho.rows() != rho.cols())
        throw DomainError("coherence_l1: matrix must be square");
    return rho.cwiseAbs().sum() - rho.diagonal().cwiseAbs().sum();
}

SnrReport evaluate_snr(const ProbeState &state, int n_spins, double delta, const SchemeSet &schemes) {
    if (!(state.beta > 0.0))
        throw DomainError("evaluate_snr: beta must be positive");
    SnrReport report;
    report.temperature = 1.0 / state.beta;
    const ComplexMatrix off = state.rho - dephase(state.rho);
    report.max_off_diagonal = off.size() ? off.cwiseAbs().maxCoeff() : 0.0;
    if (schemes.optimal) {
        report.lyapunov_residual = lyapunov_residual(state, sld(state));
        report.snr_optimal = snr_from_qfi(state.beta, qfi_spectral(state));
    }
    if (schemes.dephased) {
        report.snr_dephased = snr_from_qfi(state.beta, dephased_fi(state));
    }
    if (schemes.polarization)
        report.snr_polarization = observable_snr(state, total_polarization(n_spins));
    if (schemes.weak_reference)
        report.snr_weak_reference = weak_coupling_snr(n_spins, delta, report.temperature);
    if (schemes.coherence)
        report.coherence_l1 = coherence_l1(state.rho);
    return report;
}

} // namespace rcthermo
