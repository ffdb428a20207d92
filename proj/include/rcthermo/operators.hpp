#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <utility>

namespace rcthermo {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
// Dense complex matrix that callers promise is Hermitian. Use
// hermiticity_residual() to check the promise.
using HermitianMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr std::size_t kDefaultMaxDim = 20000;

// Index bookkeeping for N spins tensored with an M-level boson mode.
//
// Composite index = spin_config * M + boson_level. Spin configurations are
// big-endian bitstrings: site 0 is the most significant bit, bit value 0 is
// the sigma^z = +1 state. With this ordering the boson partial trace is a sum
// over strided rows.
class SpaceLayout {
  public:
    static SpaceLayout create(int n_spins, int boson_levels, std::size_t max_dim = kDefaultMaxDim);

    [[nodiscard]] int n_spins() const noexcept { return n_spins_; }
    [[nodiscard]] int boson_levels() const noexcept { return boson_levels_; }
    [[nodiscard]] Index spin_dim() const noexcept { return Index{1} << n_spins_; }
    [[nodiscard]] Index total_dim() const noexcept { return spin_dim() * boson_levels_; }

    [[nodiscard]] Index composite_index(Index spin_config, Index boson_level) const;
    [[nodiscard]] std::pair<Index, Index> split_index(Index composite) const;

    // +1 or -1: eigenvalue of sigma^z on `site` for configuration `spin_config`.
    [[nodiscard]] int z_sign(Index spin_config, int site) const noexcept {
        return ((spin_config >> (n_spins_ - 1 - site)) & 1) ? -1 : +1;
    }
    [[nodiscard]] Index flip(Index spin_config, int site) const noexcept {
        return spin_config ^ (Index{1} << (n_spins_ - 1 - site));
    }

    friend bool operator==(const SpaceLayout &, const SpaceLayout &) = default;

  private:
    SpaceLayout(int n, int m) : n_spins_(n), boson_levels_(m) {}
    int n_spins_;
    int boson_levels_;
};

enum class Axis { X, Y, Z };

// Pauli matrix on one site of a bare N-spin register (dimension 2^N).
ComplexMatrix probe_spin_operator(int n_spins, int site, Axis axis);

// Pauli matrix on `site`, identity on every other spin and on the boson.
HermitianMatrix spin_operator(const SpaceLayout &space, int site, Axis axis);

struct BosonOperators {
    RealMatrix lowering;     // a
    RealMatrix number;       // a^dagger a
    RealMatrix displacement; // a + a^dagger
};

// Truncated oscillator operators embedded on the composite space.
BosonOperators boson_operators(const SpaceLayout &space);

// Tr_RC: B(s,s') = sum_k A((s,k),(s',k)).
RealMatrix partial_trace_rc(const SpaceLayout &space, const RealMatrix &a);
ComplexMatrix partial_trace_rc(const SpaceLayout &space, const ComplexMatrix &a);

// Kronecker product, first factor most significant.
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
RealMatrix kron(const RealMatrix &a, const RealMatrix &b);

// max |A_ij - conj(A_ji)| / max |A_ij| (0 for the zero matrix).
double hermiticity_residual(const ComplexMatrix &a);
double hermiticity_residual(const RealMatrix &a);
inline bool is_hermitian(const ComplexMatrix &a, double tol = 1e-12) {
    return a.rows() == a.cols() && hermiticity_residual(a) <= tol;
}

} // namespace rcthermo
