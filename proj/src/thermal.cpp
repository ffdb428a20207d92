#include "rcthermo/thermal.hpp"

#include "rcthermo/error.hpp"

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include <atomic>
#include <bit>
#include <cstdint>
#include <cmath>
#include <iostream>
#include <random>
#include <string>

namespace rcthermo {

namespace {

void require_square(Index rows, Index cols) {
    if (rows != cols || rows == 0)
        throw DomainError("eigendecompose: expected a non-empty square matrix, got " + std::to_string(rows) +
                          "x" + std::to_string(cols));
}

template <typename Decomp>
bool all_finite(const Decomp &d) {
    return d.eigenvalues.allFinite() && d.eigenvectors.allFinite();
}

// Randomized check of H V = V diag(E) and V^dag V = 1 using a few
// matrix-vector products (Eigen kernels only, independent of BLAS).
template <typename Matrix>
bool plausible(const Matrix &h, const Eigen::VectorXd &e, const Matrix &v) {
    using Vector = Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>;
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> g;
    const double scale = std::max(h.cwiseAbs().maxCoeff(), 1e-300) * static_cast<double>(h.rows());
    for (int probe = 0; probe < 3; ++probe) {
        Eigen::VectorXd x(h.rows());
        for (Index i = 0; i < x.size(); ++i)
            x(i) = g(rng);
        const Vector vx = v * x.cast<typename Matrix::Scalar>();
        const Vector lhs = h * vx;
        const Vector rhs = v * (e.array() * x.array()).matrix().cast<typename Matrix::Scalar>();
        if ((lhs - rhs).norm() > 1e-10 * scale * x.norm())
            return false;
        if ((v.adjoint() * vx - x.cast<typename Matrix::Scalar>()).norm() > 1e-9 * x.norm())
            return false;
    }
    return true;
}

// Set once LAPACK has returned a wrong decomposition; later calls go
// straight to Eigen.
std::atomic<bool> lapack_untrusted{false};

void warn_fallback(Index n) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
        std::cerr << "rcthermo: LAPACK eigensolver returned an inaccurate decomposition (n = " << n
                  << "); falling back to Eigen's solver. If OpenBLAS mis-detects this CPU, set "
                     "OPENBLAS_CORETYPE (e.g. Haswell) to restore the fast path.\n";
}

template <typename Scalar>
BasicSpectralDecomposition<Scalar> eigen_fallback(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> solver(h);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigendecompose: Eigen solver did not converge");
    BasicSpectralDecomposition<Scalar> out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    if (!all_finite(out))
        throw NumericalError("eigendecompose: solver returned non-finite values");
    return out;
}

lapack_int lapack_solve(RealMatrix &v, Eigen::VectorXd &e) {
    const auto n = static_cast<lapack_int>(v.rows());
    return LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, v.data(), n, e.data());
}

lapack_int lapack_solve(ComplexMatrix &v, Eigen::VectorXd &e) {
    const auto n = static_cast<lapack_int>(v.rows());
    return LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, reinterpret_cast<lapack_complex_double *>(v.data()), n,
                          e.data());
}

template <typename Scalar>
BasicSpectralDecomposition<Scalar> decompose(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> &h) {
    require_square(h.rows(), h.cols());
    if (!h.allFinite())
        throw DomainError("eigendecompose: matrix has non-finite entries");
    if (!lapack_untrusted.load()) {
        BasicSpectralDecomposition<Scalar> out;
        out.eigenvalues.resize(h.rows());
        out.eigenvectors = h;
        const lapack_int info = lapack_solve(out.eigenvectors, out.eigenvalues);
        if (info < 0)
            throw NumericalError("eigendecompose: LAPACK rejected argument " + std::to_string(-info));
        if (info == 0 && all_finite(out) && plausible(h, out.eigenvalues, out.eigenvectors))
            return out;
        lapack_untrusted = true;
        warn_fallback(h.rows());
    }
    return eigen_fallback(h);
}

} // namespace

SpectralDecomposition eigendecompose(const RealMatrix &h) { return decompose(h); }

ComplexSpectralDecomposition eigendecompose(const ComplexMatrix &h) { return decompose(h); }

SpectralDecomposition decompose_model(const ModelParams &params, std::size_t max_dim) {
    auto d = eigendecompose(extended_hamiltonian(params, max_dim));
    d.params = params;
    return d;
}

Eigen::VectorXd gibbs_weights(const Eigen::VectorXd &eigenvalues, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw DomainError("gibbs_weights: beta must be finite and >= 0");
    if (eigenvalues.size() == 0)
        throw DomainError("gibbs_weights: empty spectrum");
    const double e_min = eigenvalues.minCoeff();
    Eigen::VectorXd w(eigenvalues.size());
    for (Index i = 0; i < w.size(); ++i)
        w(i) = std::exp(-beta * (eigenvalues(i) - e_min));
    w /= w.sum();
    return w;
}

template <typename Scalar>
ProbeState reduced_probe_state(const BasicSpectralDecomposition<Scalar> &decomp, double beta,
                               const SpaceLayout &space) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw DomainError("reduced_probe_state: beta must be finite and >= 0");
    if (decomp.dim() != space.total_dim() || decomp.eigenvectors.rows() != space.total_dim())
        throw DomainError("reduced_probe_state: decomposition dimension " + std::to_string(decomp.dim()) +
                          " does not match layout dimension " + std::to_string(space.total_dim()));

    const Eigen::VectorXd &energies = decomp.eigenvalues;
    const Eigen::VectorXd w = gibbs_weights(energies, beta);
    const double mean_energy = w.dot(energies);
    const double e_min = energies.minCoeff();

    // Eigenvalues are ascending, so the retained set is a prefix.
    Index kept = 0;
    while (kept < decomp.dim() && beta * (energies(kept) - e_min) <= kNegligibleExponent)
        ++kept;

    const Eigen::VectorXd dw = (w.head(kept).array() * (mean_energy - energies.head(kept).array())).matrix();

    const Index ns = space.spin_dim();
    const Index m = space.boson_levels();
    const Index ld = decomp.eigenvectors.rows();
    Matrix rho = Matrix::Zero(ns, ns);
    Matrix drho = Matrix::Zero(ns, ns);
    Matrix block(ns, kept);
    Matrix scaled(2 * ns, kept);
    for (Index k = 0; k < m; ++k) {
        // Rows (s, k) for all spin configurations s: stride m in the column.
        Eigen::Map<const Matrix, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>> rows(
            decomp.eigenvectors.data() + k, ns, kept, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(ld, m));
        block = rows;
        scaled.topRows(ns) = block * w.head(kept).template cast<Scalar>().asDiagonal();
        scaled.bottomRows(ns) = block * dw.template cast<Scalar>().asDiagonal();
        const Matrix product = scaled * block.adjoint();
        rho += product.topRows(ns);
        drho += product.bottomRows(ns);
    }

    ProbeState out;
    out.beta = beta;
    out.rho = rho.template cast<Complex>();
    out.drho_dbeta = drho.template cast<Complex>();
    out.rho = (0.5 * (out.rho + out.rho.adjoint())).eval();
    out.drho_dbeta = (0.5 * (out.drho_dbeta + out.drho_dbeta.adjoint())).eval();
    // With a pure sigma_x coupling the spin parity prod_i sigma^z_i is conserved
    // up to the RC parity, so configurations of opposite parity never mix.
    if (decomp.params && decomp.params->coupling == CouplingKind::X) {
        for (Index j = 0; j < ns; ++j)
            for (Index i = 0; i < ns; ++i)
                if (std::popcount(static_cast<std::uint64_t>(i ^ j)) % 2 == 1)
                    out.rho(i, j) = out.drho_dbeta(i, j) = 0.0;
    }
    return out;
}

template <typename Scalar>
ComplexMatrix finite_difference_drho(const BasicSpectralDecomposition<Scalar> &decomp, double beta,
                                     const SpaceLayout &space, double h) {
    if (!(h > 0.0))
        throw DomainError("finite_difference_drho: step must be positive");
    if (!(beta - h > 0.0))
        throw DomainError("finite_difference_drho: beta - h must be positive");
    const auto plus = reduced_probe_state(decomp, beta + h, space);
    const auto minus = reduced_probe_state(decomp, beta - h, space);
    return (plus.rho - minus.rho) / (2.0 * h);
}

ComplexMatrix canonical_probe_state(int n_spins, double delta, double beta) {
    const RealMatrix hp = probe_space_hamiltonian(n_spins, delta);
    const Eigen::VectorXd w = gibbs_weights(hp.diagonal(), beta);
    return w.cast<Complex>().asDiagonal();
}

template ProbeState reduced_probe_state(const SpectralDecomposition &, double, const SpaceLayout &);
template ProbeState reduced_probe_state(const ComplexSpectralDecomposition &, double, const SpaceLayout &);
template ComplexMatrix finite_difference_drho(const SpectralDecomposition &, double, const SpaceLayout &, double);
template ComplexMatrix finite_difference_drho(const ComplexSpectralDecomposition &, double, const SpaceLayout &,
                                              double);

} // namespace rcthermo
