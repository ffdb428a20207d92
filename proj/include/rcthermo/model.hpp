#pragma once

#include "rcthermo/operators.hpp"

#include <string>
#include <string_view>

namespace rcthermo {

// Probe operator S that couples to the reaction coordinate.
//   X      : S = sum_i sigma^x_i
//   XZ_MIX : S = sum_i (sigma^x_i + sigma^z_i) / sqrt(2)
enum class CouplingKind { X, XZ_MIX };

CouplingKind parse_coupling_kind(std::string_view name);
std::string to_string(CouplingKind kind);

// Energies are in units of the spin splitting delta (hbar = k_B = 1).
struct ModelParams {
    double delta = 1.0;
    double omega = 15.0;
    double lambda = 0.0;
    CouplingKind coupling = CouplingKind::X;
    int n_spins = 1;
    int boson_levels = 50;

    void validate() const;
    [[nodiscard]] SpaceLayout layout(std::size_t max_dim = kDefaultMaxDim) const {
        return SpaceLayout::create(n_spins, boson_levels, max_dim);
    }
    friend bool operator==(const ModelParams &, const ModelParams &) = default;
};

// Probe-space (2^N) operators. All have real entries.
RealMatrix probe_space_hamiltonian(int n_spins, double delta);
RealMatrix probe_space_coupling(int n_spins, CouplingKind kind);

// The same operators embedded on the composite space (identity on the boson).
RealMatrix probe_hamiltonian(const SpaceLayout &space, double delta);
RealMatrix coupling_operator(const SpaceLayout &space, CouplingKind kind);

// H_S = H_p + omega a^dag a + lambda S (a^dag + a). Real symmetric.
RealMatrix extended_hamiltonian(const ModelParams &params, std::size_t max_dim = kDefaultMaxDim);

// prod_i sigma^z_i times (-1)^(a^dag a); commutes with H_S for CouplingKind::X.
RealMatrix composite_parity(const SpaceLayout &space);

} // namespace rcthermo
