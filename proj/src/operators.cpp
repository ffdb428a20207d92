#include "rcthermo/operators.hpp"

#include "rcthermo/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rcthermo {

SpaceLayout SpaceLayout::create(int n_spins, int boson_levels, std::size_t max_dim) {
    if (n_spins < 1)
        throw DomainError("n_spins must be >= 1, got " + std::to_string(n_spins));
    if (boson_levels < 2)
        throw DomainError("boson_levels must be >= 2, got " + std::to_string(boson_levels));
    if (n_spins > 30)
        throw DomainError("n_spins " + std::to_string(n_spins) + " exceeds the dimension cap " +
                          std::to_string(max_dim));
    const auto dim = (std::size_t{1} << n_spins) * static_cast<std::size_t>(boson_levels);
    if (dim > max_dim)
        throw DomainError("composite dimension 2^" + std::to_string(n_spins) + " * " +
                          std::to_string(boson_levels) + " = " + std::to_string(dim) +
                          " exceeds the dimension cap " + std::to_string(max_dim));
    return SpaceLayout(n_spins, boson_levels);
}

Index SpaceLayout::composite_index(Index spin_config, Index boson_level) const {
    if (spin_config < 0 || spin_config >= spin_dim() || boson_level < 0 || boson_level >= boson_levels_)
        throw DomainError("composite_index: (spin, boson) out of range");
    return spin_config * boson_levels_ + boson_level;
}

std::pair<Index, Index> SpaceLayout::split_index(Index composite) const {
    if (composite < 0 || composite >= total_dim())
        throw DomainError("split_index: composite index out of range");
    return {composite / boson_levels_, composite % boson_levels_};
}

namespace {

ComplexMatrix pauli(Axis axis) {
    ComplexMatrix p(2, 2);
    const Complex i{0.0, 1.0};
    switch (axis) {
    case Axis::X: p << 0.0, 1.0, 1.0, 0.0; break;
    case Axis::Y: p << 0.0, -i, i, 0.0; break;
    case Axis::Z: p << 1.0, 0.0, 0.0, -1.0; break;
    }
    return p;
}

void check_site(int n_spins, int site) {
    if (site < 0 || site >= n_spins)
        throw DomainError("spin site " + std::to_string(site) + " out of range [0, " + std::to_string(n_spins) +
                          ")");
}

template <typename Matrix>
Matrix partial_trace_impl(const SpaceLayout &space, const Matrix &a) {
    if (a.rows() != space.total_dim() || a.cols() != space.total_dim())
        throw DomainError("partial_trace_rc: matrix is " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + ", expected " + std::to_string(space.total_dim()));
    const Index ns = space.spin_dim();
    const Index m = space.boson_levels();
    Matrix b = Matrix::Zero(ns, ns);
    for (Index sp = 0; sp < ns; ++sp)
        for (Index s = 0; s < ns; ++s)
            for (Index k = 0; k < m; ++k)
                b(s, sp) += a(s * m + k, sp * m + k);
    return b;
}

template <typename Matrix>
Matrix kron_impl(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

template <typename Matrix>
double hermiticity_impl(const Matrix &a) {
    if (a.rows() != a.cols())
        return std::numeric_limits<double>::infinity();
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0)
        return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

} // namespace

ComplexMatrix probe_spin_operator(int n_spins, int site, Axis axis) {
    if (n_spins < 1)
        throw DomainError("n_spins must be >= 1");
    check_site(n_spins, site);
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int i = 0; i < n_spins; ++i)
        out = kron(out, i == site ? pauli(axis) : ComplexMatrix::Identity(2, 2));
    return out;
}

HermitianMatrix spin_operator(const SpaceLayout &space, int site, Axis axis) {
    check_site(space.n_spins(), site);
    return kron(probe_spin_operator(space.n_spins(), site, axis),
                ComplexMatrix::Identity(space.boson_levels(), space.boson_levels()));
}

BosonOperators boson_operators(const SpaceLayout &space) {
    const Index m = space.boson_levels();
    RealMatrix a = RealMatrix::Zero(m, m);
    for (Index k = 1; k < m; ++k)
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const RealMatrix n = a.transpose() * a;
    const RealMatrix x = a + a.transpose();
    const RealMatrix id = RealMatrix::Identity(space.spin_dim(), space.spin_dim());
    return {kron(id, a), kron(id, n), kron(id, x)};
}

RealMatrix partial_trace_rc(const SpaceLayout &space, const RealMatrix &a) { return partial_trace_impl(space, a); }
ComplexMatrix partial_trace_rc(const SpaceLayout &space, const ComplexMatrix &a) {
    return partial_trace_impl(space, a);
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) { return kron_impl(a, b); }
RealMatrix kron(const RealMatrix &a, const RealMatrix &b) { return kron_impl(a, b); }

double hermiticity_residual(const ComplexMatrix &a) { return hermiticity_impl(a); }
double hermiticity_residual(const RealMatrix &a) { return hermiticity_impl(a); }

} // namespace rcthermo
