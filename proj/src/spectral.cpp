#include "rcthermo/spectral.hpp"

#include "rcthermo/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace rcthermo {

namespace {

constexpr double kInitialWindow = 20.0;
constexpr int kMaxDoublings = 24;
constexpr unsigned kMaxDepth = 20;

struct Moments {
    double first = 0.0;
    double third = 0.0;
    double error = 0.0; // absolute, summed over both moments' estimates
};

// Points where the Brownian integrand changes character; the quadrature is
// split there so a narrow resonance is never straddled by a single panel.
std::vector<double> breakpoints(const SpectralDensity &density, double lo, double hi) {
    std::vector<double> pts{lo, hi};
    if (const auto *b = std::get_if<BrownianDensity>(&density)) {
        const double width = std::numbers::pi * b->gamma * b->omega0;
        for (double f : {1.0, 10.0, 100.0}) {
            pts.push_back(b->omega0 - f * width);
            pts.push_back(b->omega0 + f * width);
        }
        pts.push_back(b->omega0);
    } else if (const auto *o = std::get_if<OhmicExpDensity>(&density)) {
        for (double f : {1.0, 4.0, 10.0})
            pts.push_back(f * o->cutoff);
    }
    std::erase_if(pts, [&](double p) { return p < lo || p > hi || !std::isfinite(p); });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

Moments integrate_moments(const SpectralDensity &density, double lo, double hi, double tol) {
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
    Moments out;
    const auto pts = breakpoints(density, lo, hi);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        double err1 = 0.0;
        double err3 = 0.0;
        out.first += Quadrature::integrate([&](double w) { return w * evaluate_j(density, w); }, a, b, kMaxDepth,
                                           tol, &err1);
        out.third += Quadrature::integrate([&](double w) { return w * w * w * evaluate_j(density, w); }, a, b,
                                           kMaxDepth, tol, &err3);
        out.error += err1 + err3;
    }
    return out;
}

RcParameters from_moments(const Moments &m, double omega_max, double relative_error) {
    if (!(m.first > 0.0) || !(m.third > 0.0))
        throw NumericalError("rc_parameters: moments of J vanish; cannot define a reaction coordinate");
    RcParameters out;
    out.first_moment = m.first;
    out.third_moment = m.third;
    out.omega = std::sqrt(m.third / m.first);
    out.lambda = std::sqrt(m.first / out.omega);
    out.omega_max = omega_max;
    out.error_estimate = relative_error;
    return out;
}

void check_tol(double quad_tol) {
    if (!(quad_tol > 0.0) || quad_tol >= 1.0)
        throw DomainError("quad_tol must lie in (0, 1)");
}

} // namespace

void validate(const SpectralDensity &density) {
    std::visit(
        [](const auto &d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, BrownianDensity>) {
                if (!(d.gamma > 0.0) || !(d.omega0 > 0.0) || !(d.lambda0 > 0.0))
                    throw DomainError("Brownian density needs gamma, omega0, lambda0 > 0");
            } else {
                if (!(d.gamma > 0.0) || !(d.cutoff > 0.0))
                    throw DomainError("Ohmic density needs gamma, cutoff > 0");
            }
        },
        density);
}

double evaluate_j(const SpectralDensity &density, double omega) {
    if (!(omega >= 0.0))
        throw DomainError("evaluate_j: omega must be >= 0");
    return std::visit(
        [omega](const auto &d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, BrownianDensity>) {
                const double w0sq = d.omega0 * d.omega0;
                const double detune = omega * omega - w0sq;
                const double damping = 2.0 * std::numbers::pi * d.gamma * d.omega0 * omega;
                const double denom = detune * detune + damping * damping;
                return denom == 0.0 ? 0.0 : 4.0 * d.gamma * w0sq * d.lambda0 * d.lambda0 * omega / denom;
            } else {
                return d.gamma * omega * std::exp(-omega / d.cutoff);
            }
        },
        density);
}

double frequency_scale(const SpectralDensity &density) {
    return std::visit(
        [](const auto &d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, BrownianDensity>)
                return d.omega0;
            else
                return d.cutoff;
        },
        density);
}

RcParameters rc_parameters_on_window(const SpectralDensity &density, double omega_max, double quad_tol) {
    validate(density);
    check_tol(quad_tol);
    if (!(omega_max > 0.0) || !std::isfinite(omega_max))
        throw DomainError("rc_parameters_on_window: omega_max must be positive and finite");
    const auto m = integrate_moments(density, 0.0, omega_max, quad_tol);
    return from_moments(m, omega_max, m.error / (m.first + m.third));
}

RcParameters rc_parameters(const SpectralDensity &density, double quad_tol) {
    validate(density);
    check_tol(quad_tol);
    double omega_max = kInitialWindow * frequency_scale(density);
    Moments total = integrate_moments(density, 0.0, omega_max, quad_tol);
    double tail_fraction = 1.0;
    for (int step = 0; step < kMaxDoublings; ++step) {
        const Moments piece = integrate_moments(density, omega_max, 2.0 * omega_max, quad_tol);
        total.first += piece.first;
        total.third += piece.third;
        total.error += piece.error;
        omega_max *= 2.0;
        tail_fraction = std::max(piece.first / total.first, piece.third / total.third);
        if (tail_fraction <= quad_tol) {
            const double quad_error = total.error / (total.first + total.third);
            return from_moments(total, omega_max, quad_error + tail_fraction);
        }
    }
    std::ostringstream msg;
    msg.precision(6);
    msg << "rc_parameters: moments of J did not converge up to omega_max = " << omega_max
        << " (last doubling changed a moment by a relative " << tail_fraction
        << "); the third moment of this density may diverge";
    throw QuadratureError(msg.str(), tail_fraction);
}

} // namespace rcthermo
