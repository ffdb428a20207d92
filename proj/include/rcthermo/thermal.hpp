#pragma once

#include "rcthermo/model.hpp"
#include "rcthermo/operators.hpp"

#include <optional>

namespace rcthermo {

// Eigenpairs of a Hermitian matrix, eigenvalues ascending, eigenvectors as
// columns. Computed once per model and reused over a whole temperature grid.
template <typename Scalar>
struct BasicSpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;
    std::optional<ModelParams> params;

    [[nodiscard]] Index dim() const noexcept { return eigenvalues.size(); }
};

using SpectralDecomposition = BasicSpectralDecomposition<double>;
using ComplexSpectralDecomposition = BasicSpectralDecomposition<Complex>;

// LAPACK ?syevd / ?heevd. Every result is spot-checked with random
// matrix-vector products; if LAPACK returns a wrong decomposition (seen with
// OpenBLAS kernels picked for the wrong CPU) the call is redone with Eigen's
// solver and LAPACK is not used again in this process. Throws NumericalError
// if no solver produces finite eigenpairs, DomainError for non-square input.
SpectralDecomposition eigendecompose(const RealMatrix &h);
ComplexSpectralDecomposition eigendecompose(const ComplexMatrix &h);

// Diagonalizes extended_hamiltonian(params) and tags the result with params.
SpectralDecomposition decompose_model(const ModelParams &params, std::size_t max_dim = kDefaultMaxDim);

// Reduced probe state at inverse temperature beta together with its exact
// beta-derivative.
struct ProbeState {
    double beta = 0.0;
    ComplexMatrix rho;
    ComplexMatrix drho_dbeta;
};

// w_i = exp(-beta (E_i - E_min)) / sum_j exp(-beta (E_j - E_min)).
Eigen::VectorXd gibbs_weights(const Eigen::VectorXd &eigenvalues, double beta);

// rho_p = Tr_RC[V diag(w) V^dag] and
// d rho_p / d beta = Tr_RC[V diag(w (<E> - E)) V^dag].
//
// Eigenpairs with beta (E_i - E_min) above kNegligibleExponent carry relative
// weight below 1e-26 and are skipped.
template <typename Scalar>
ProbeState reduced_probe_state(const BasicSpectralDecomposition<Scalar> &decomp, double beta,
                               const SpaceLayout &space);

inline constexpr double kNegligibleExponent = 60.0;

// Central difference [rho_p(beta + h) - rho_p(beta - h)] / 2h.
template <typename Scalar>
ComplexMatrix finite_difference_drho(const BasicSpectralDecomposition<Scalar> &decomp, double beta,
                                     const SpaceLayout &space, double h);

// Canonical probe state exp(-beta H_p)/Z_p on the 2^N space.
ComplexMatrix canonical_probe_state(int n_spins, double delta, double beta);

} // namespace rcthermo
