#include "rcthermo/error.hpp"
#include "rcthermo/metrology.hpp"
#include "rcthermo/model.hpp"
#include "rcthermo/thermal.hpp"
#include "test_helpers.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace rcthermo;
using Catch::Approx;

namespace {

ProbeState model_state(int n, double lambda, CouplingKind kind, double beta, int m = 20) {
    ModelParams p;
    p.n_spins = n;
    p.boson_levels = m;
    p.omega = 15.0;
    p.lambda = lambda;
    p.coupling = kind;
    return reduced_probe_state(decompose_model(p), beta, p.layout());
}

// Gibbs state of a probe-space Hamiltonian together with its beta derivative.
ProbeState gibbs_state(const ComplexMatrix &h, double beta) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    const auto w = gibbs_weights(es.eigenvalues(), beta);
    const double mean = w.dot(es.eigenvalues());
    const Eigen::VectorXd dw = (w.array() * (mean - es.eigenvalues().array())).matrix();
    const ComplexMatrix &v = es.eigenvectors();
    ProbeState s;
    s.beta = beta;
    s.rho = v * w.cast<Complex>().asDiagonal() * v.adjoint();
    s.drho_dbeta = v * dw.cast<Complex>().asDiagonal() * v.adjoint();
    return s;
}

double sech(double x) { return 1.0 / std::cosh(x); }

} // namespace

TEST_CASE("sld of a commuting family is the centred energy", "[metrology]") {
    std::mt19937_64 rng(11);
    const ComplexMatrix h = testing::random_hermitian(4, rng);
    const auto s = gibbs_state(h, 0.7);
    const ComplexMatrix l = sld(s);
    const double mean = (s.rho * h).trace().real();
    const ComplexMatrix expected = mean * ComplexMatrix::Identity(4, 4) - h;
    CHECK((l - expected).norm() <= 1e-10);
    CHECK(lyapunov_residual(s, l) <= 1e-12);
}

TEST_CASE("sld of a static state vanishes", "[metrology]") {
    std::mt19937_64 rng(3);
    ProbeState s;
    s.beta = 1.0;
    s.rho = testing::random_density(3, rng);
    s.drho_dbeta = ComplexMatrix::Zero(3, 3);
    const auto l = sld(s);
    CHECK(l.norm() == 0.0);
    CHECK(qfi(s, l) == 0.0);
    CHECK(lyapunov_residual(s, l) == 0.0);
}

TEST_CASE("sld solves the Lyapunov equation for random states", "[metrology]") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 10; ++rep) {
        ProbeState s;
        s.beta = 1.0;
        s.rho = testing::random_density(4, rng);
        ComplexMatrix d = testing::random_hermitian(4, rng);
        d -= (d.trace() / 4.0) * ComplexMatrix::Identity(4, 4);
        s.drho_dbeta = d;
        const auto l = sld(s);
        CHECK(is_hermitian(l, 1e-10));
        CHECK(lyapunov_residual(s, l) <= 1e-10);
        CHECK(qfi(s, l) == Approx(qfi_spectral(s)).epsilon(1e-9));
    }
}

TEST_CASE("sld rejects malformed states", "[metrology]") {
    ProbeState s;
    s.beta = 1.0;
    s.rho = ComplexMatrix::Zero(2, 2);
    s.rho(0, 0) = 1.2;
    s.rho(1, 1) = -0.2;
    s.drho_dbeta = ComplexMatrix::Zero(2, 2);
    CHECK_THROWS_AS(sld(s), NumericalError);
    s.rho(1, 1) = 0.0;
    s.rho(0, 1) = 0.3;
    CHECK_THROWS_AS(sld(s), DomainError);
}

TEST_CASE("qfi of the uncoupled qubit", "[metrology]") {
    const auto s = model_state(1, 0.0, CouplingKind::X, 1.0, 10);
    const double f = qfi(s, sld(s));
    CHECK(f == Approx(sech(1.0) * sech(1.0)).epsilon(1e-12));
    CHECK(f == Approx(0.419974).epsilon(1e-6));
    CHECK(snr_from_qfi(1.0, f) == Approx(0.648054).epsilon(1e-6));
    CHECK(qfi_spectral(s) == Approx(f).epsilon(1e-12));
}

TEST_CASE("qfi vanishes when populations freeze", "[metrology]") {
    double previous = 1.0;
    for (double beta : {5.0, 10.0, 20.0, 40.0}) {
        const auto s = model_state(1, 0.0, CouplingKind::X, beta, 10);
        const double f = qfi(s, sld(s));
        CHECK(f >= 0.0);
        CHECK(f <= previous);
        if (beta < 20.0)
            CHECK(f > 0.0);
        previous = f;
    }
    CHECK(previous < 1e-30);
}

TEST_CASE("qfi is additive for uncoupled spins", "[metrology]") {
    for (double beta : {0.3, 1.0, 3.0}) {
        const auto one = model_state(1, 0.0, CouplingKind::X, beta, 6);
        const auto two = model_state(2, 0.0, CouplingKind::X, beta, 6);
        const auto three = model_state(3, 0.0, CouplingKind::X, beta, 6);
        const double f1 = qfi(one, sld(one));
        CHECK(qfi(two, sld(two)) == Approx(2.0 * f1).epsilon(1e-10));
        CHECK(qfi(three, sld(three)) == Approx(3.0 * f1).epsilon(1e-10));
    }
}

TEST_CASE("snr from qfi", "[metrology]") {
    CHECK(snr_from_qfi(2.0, 0.0) == 0.0);
    CHECK(snr_from_qfi(2.0, 0.25) == Approx(1.0));
    CHECK(snr_from_qfi(2.0, 0.25, 4) == Approx(2.0));
    CHECK_THROWS_AS(snr_from_qfi(1.0, 1.0, 0), DomainError);
    CHECK_THROWS_AS(snr_from_qfi(1.0, -1.0), DomainError);
}

TEST_CASE("weak coupling reference curve", "[metrology]") {
    CHECK(weak_coupling_snr(1, 1.0, 1.0) == Approx(0.648054).epsilon(1e-6));
    CHECK(weak_coupling_snr(1, 2.0, 2.0) == Approx(0.648054).epsilon(1e-6));
    CHECK(weak_coupling_snr(1, 1.0, 0.83356) == Approx(0.66274).epsilon(1e-5));
    for (double t : {0.01, 0.3, 1.0, 7.0, 100.0})
        CHECK(weak_coupling_snr(4, 1.0, t) == Approx(2.0 * weak_coupling_snr(1, 1.0, t)).epsilon(1e-15));
    // no overflow deep in either limit
    CHECK(weak_coupling_snr(1, 1.0, 1e-3) == 0.0);
    CHECK(std::isfinite(weak_coupling_snr(1, 1.0, 1e6)));
    CHECK_THROWS_AS(weak_coupling_snr(1, 1.0, 0.0), DomainError);
}

TEST_CASE("dephasing", "[metrology]") {
    std::mt19937_64 rng(2);
    const ComplexMatrix rho = testing::random_density(4, rng);
    const ComplexMatrix d = dephase(rho);
    CHECK(d.trace() == rho.trace());
    CHECK(coherence_l1(d) == 0.0);
    CHECK(dephase(d) == d);
    for (Index i = 0; i < 4; ++i)
        CHECK(d(i, i) == rho(i, i));
}

TEST_CASE("classical Fisher information of populations", "[metrology]") {
    Eigen::VectorXd p(3), dp(3);
    p << 0.5, 0.5, 0.0;
    dp << 0.0, 0.0, 0.0;
    CHECK(classical_fi_diagonal(p, dp) == 0.0);
    dp << 0.1, -0.1, 0.0;
    CHECK(classical_fi_diagonal(p, dp) == Approx(0.04));
    p << 1.2, -0.2, 0.0;
    CHECK_THROWS_AS(classical_fi_diagonal(p, dp), DomainError);
}

TEST_CASE("observable snr", "[metrology]") {
    for (double t : {0.2, 0.83356, 1.0, 5.0}) {
        const auto s = model_state(1, 0.0, CouplingKind::X, 1.0 / t, 10);
        CHECK(observable_snr(s, total_polarization(1)) == Approx(weak_coupling_snr(1, 1.0, t)).epsilon(1e-10));
        CHECK(observable_snr(s, ComplexMatrix::Identity(2, 2)) == 0.0);
    }
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 6; ++rep) {
        const auto s = model_state(2, 2.0 * rep, rep % 2 ? CouplingKind::XZ_MIX : CouplingKind::X, 0.5 + rep, 12);
        const double bound = snr_from_qfi(s.beta, qfi(s, sld(s)));
        CHECK(observable_snr(s, testing::random_hermitian(4, rng)) <= bound + 1e-9);
    }
    const auto s = model_state(1, 0.0, CouplingKind::X, 1.0, 4);
    CHECK_THROWS_AS(observable_snr(s, total_polarization(2)), DomainError);
}

TEST_CASE("total polarization", "[metrology]") {
    const ComplexMatrix z1 = total_polarization(1);
    CHECK(z1(0, 0) == Complex(1.0));
    CHECK(z1(1, 1) == Complex(-1.0));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(total_polarization(2));
    CHECK(es.eigenvalues()(0) == Approx(-2.0));
    CHECK(es.eigenvalues()(1) == Approx(0.0).margin(1e-15));
    CHECK(es.eigenvalues()(2) == Approx(0.0).margin(1e-15));
    CHECK(es.eigenvalues()(3) == Approx(2.0));
    for (int n = 1; n <= 4; ++n) {
        const ComplexMatrix o = total_polarization(n);
        const ComplexMatrix h = probe_space_hamiltonian(n, 1.0).cast<Complex>();
        CHECK((o * h - h * o).norm() == 0.0);
    }
}

TEST_CASE("l1 coherence", "[metrology]") {
    ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
    CHECK(coherence_l1(plus) == Approx(1.0));
    CHECK(coherence_l1(ComplexMatrix::Identity(3, 3) / 3.0) == 0.0);
}

TEST_CASE("coherences of the mixed coupling fade at high temperature", "[metrology]") {
    const double c_low = coherence_l1(model_state(1, 10.0, CouplingKind::XZ_MIX, 10.0, 40).rho);
    CHECK(c_low > 1e-3);
    double previous = std::numeric_limits<double>::infinity();
    for (double t : {2.0, 5.0, 10.0, 30.0, 100.0}) {
        const double c = coherence_l1(model_state(1, 10.0, CouplingKind::XZ_MIX, 1.0 / t, 40).rho);
        CHECK(c < previous);
        previous = c;
    }
    CHECK(previous < 1e-3);
    // the pure-X coupling keeps a single spin diagonal
    CHECK(coherence_l1(model_state(1, 10.0, CouplingKind::X, 10.0, 40).rho) <= 1e-12);
}

TEST_CASE("measurement hierarchy", "[metrology]") {
    for (auto kind : {CouplingKind::X, CouplingKind::XZ_MIX}) {
        for (int n : {1, 2}) {
            for (double t : {0.05, 0.3, 1.0, 4.0}) {
                const auto s = model_state(n, 6.0, kind, 1.0 / t, 16);
                const auto r = evaluate_snr(s, n, 1.0);
                INFO("n=" << n << " t=" << t << " kind=" << to_string(kind));
                CHECK(r.snr_dephased >= 0.0);
                CHECK(r.snr_optimal + 1e-9 >= r.snr_dephased);
                CHECK(r.snr_optimal + 1e-9 >= r.snr_polarization);
                CHECK(r.lyapunov_residual <= 1e-8);
                if (kind == CouplingKind::X && n == 1)
                    CHECK(r.snr_dephased == Approx(r.snr_optimal).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("coherent two-spin states lose precision under dephasing", "[metrology]") {
    // equal-parity coherences make the population measurement strictly worse
    const auto s = model_state(2, 5.0, CouplingKind::X, 1.0 / 0.5, 20);
    const auto r = evaluate_snr(s, 2, 1.0);
    CHECK(r.max_off_diagonal > 1e-3);
    CHECK(r.snr_dephased < r.snr_optimal * (1.0 - 1e-6));
}

TEST_CASE("uncoupled spins scale as the square root of their number", "[metrology]") {
    for (double t : {0.1, 0.5, 1.0, 3.0, 20.0}) {
        const double one = evaluate_snr(model_state(1, 0.0, CouplingKind::X, 1.0 / t, 6), 1, 1.0).snr_optimal;
        const auto r3 = evaluate_snr(model_state(3, 0.0, CouplingKind::X, 1.0 / t, 6), 3, 1.0);
        CHECK(r3.snr_optimal == Approx(std::sqrt(3.0) * one).epsilon(1e-8));
        CHECK(r3.snr_optimal == Approx(r3.snr_weak_reference).epsilon(1e-8));
        CHECK(r3.snr_polarization == Approx(r3.snr_optimal).epsilon(1e-8));
    }
}

TEST_CASE("scheme selection leaves the rest unevaluated", "[metrology]") {
    const auto s = model_state(1, 2.0, CouplingKind::X, 1.0, 8);
    SchemeSet only;
    only.dephased = only.polarization = only.weak_reference = only.coherence = false;
    const auto r = evaluate_snr(s, 1, 1.0, only);
    CHECK(std::isfinite(r.snr_optimal));
    CHECK(std::isnan(r.snr_dephased));
    CHECK(std::isnan(r.snr_polarization));
    CHECK(std::isnan(r.snr_weak_reference));
    CHECK(std::isnan(r.coherence_l1));
    CHECK(r.temperature == Approx(1.0));
}

TEST_CASE("polarization snr stays finite near the ground state", "[metrology]") {
    for (double t : {0.05, 0.08}) {
        const auto s = model_state(3, 0.0, CouplingKind::X, 1.0 / t, 4);
        CHECK(observable_snr(s, total_polarization(3)) == Approx(weak_coupling_snr(3, 1.0, t)).epsilon(1e-6));
    }
    // spread below 1e-14: reported as no information
    for (double t : {0.02, 0.03}) {
        const auto s = model_state(3, 0.0, CouplingKind::X, 1.0 / t, 4);
        CHECK(observable_snr(s, total_polarization(3)) == 0.0);
    }
}
