#include "rcthermo/model.hpp"

#include "rcthermo/error.hpp"

#include <cmath>
#include <numbers>

namespace rcthermo {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

CouplingKind parse_coupling_kind(std::string_view name) {
    if (name == "x" || name == "X")
        return CouplingKind::X;
    if (name == "xz" || name == "XZ" || name == "xz_mix" || name == "XZ_MIX")
        return CouplingKind::XZ_MIX;
    throw DomainError("unknown coupling kind '" + std::string(name) + "' (expected x or xz_mix)");
}

std::string to_string(CouplingKind kind) { return kind == CouplingKind::X ? "x" : "xz_mix"; }

void ModelParams::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw DomainError("delta must be positive");
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw DomainError("omega must be positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw DomainError("lambda must be non-negative");
    if (n_spins < 1)
        throw DomainError("n_spins must be >= 1");
    if (boson_levels < 2)
        throw DomainError("boson_levels must be >= 2");
}

RealMatrix probe_space_hamiltonian(int n_spins, double delta) {
    const auto space = SpaceLayout::create(n_spins, 2);
    RealMatrix h = RealMatrix::Zero(space.spin_dim(), space.spin_dim());
    for (Index s = 0; s < space.spin_dim(); ++s)
        for (int i = 0; i < n_spins; ++i)
            h(s, s) += delta * space.z_sign(s, i);
    return h;
}

RealMatrix probe_space_coupling(int n_spins, CouplingKind kind) {
    const auto space = SpaceLayout::create(n_spins, 2);
    const Index ns = space.spin_dim();
    RealMatrix s_op = RealMatrix::Zero(ns, ns);
    const double x_weight = kind == CouplingKind::X ? 1.0 : kInvSqrt2;
    const double z_weight = kind == CouplingKind::X ? 0.0 : kInvSqrt2;
    for (Index s = 0; s < ns; ++s) {
        for (int i = 0; i < n_spins; ++i) {
            s_op(space.flip(s, i), s) += x_weight;
            s_op(s, s) += z_weight * space.z_sign(s, i);
        }
    }
    return s_op;
}

namespace {

RealMatrix embed_probe(const SpaceLayout &space, const RealMatrix &probe) {
    return kron(probe, RealMatrix::Identity(space.boson_levels(), space.boson_levels()));
}

} // namespace

RealMatrix probe_hamiltonian(const SpaceLayout &space, double delta) {
    return embed_probe(space, probe_space_hamiltonian(space.n_spins(), delta));
}

RealMatrix coupling_operator(const SpaceLayout &space, CouplingKind kind) {
    return embed_probe(space, probe_space_coupling(space.n_spins(), kind));
}

RealMatrix extended_hamiltonian(const ModelParams &params, std::size_t max_dim) {
    params.validate();
    const auto space = params.layout(max_dim);
    const Index ns = space.spin_dim();
    const Index m = space.boson_levels();
    const RealMatrix hp = probe_space_hamiltonian(params.n_spins, params.delta);
    const RealMatrix s_op = probe_space_coupling(params.n_spins, params.coupling);

    // Assembled entry by entry: the boson factor is tridiagonal and a dense
    // Kronecker product would allocate several dim^2 temporaries.
    RealMatrix h = RealMatrix::Zero(space.total_dim(), space.total_dim());
    for (Index s = 0; s < ns; ++s)
        for (Index k = 0; k < m; ++k)
            h(s * m + k, s * m + k) = hp(s, s) + params.omega * static_cast<double>(k);
    if (params.lambda == 0.0)
        return h;
    for (Index sp = 0; sp < ns; ++sp) {
        for (Index s = 0; s < ns; ++s) {
            const double c = params.lambda * s_op(s, sp);
            if (c == 0.0)
                continue;
            for (Index k = 0; k + 1 < m; ++k) {
                const double amp = c * std::sqrt(static_cast<double>(k + 1));
                h(s * m + k, sp * m + k + 1) += amp;
                h(s * m + k + 1, sp * m + k) += amp;
            }
        }
    }
    return h;
}

RealMatrix composite_parity(const SpaceLayout &space) {
    const Index m = space.boson_levels();
    RealMatrix p = RealMatrix::Zero(space.total_dim(), space.total_dim());
    for (Index s = 0; s < space.spin_dim(); ++s) {
        int sign = 1;
        for (int i = 0; i < space.n_spins(); ++i)
            sign *= space.z_sign(s, i);
        for (Index k = 0; k < m; ++k)
            p(s * m + k, s * m + k) = (k % 2 == 0) ? sign : -sign;
    }
    return p;
}

} // namespace rcthermo
