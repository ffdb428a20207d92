#pragma once

#include <variant>

namespace rcthermo {

// Resonance-peaked density centred on omega0 with dimensionless width gamma:
//   J(w) = 4 gamma omega0^2 lambda0^2 w / ((w^2 - omega0^2)^2 + (2 pi gamma omega0 w)^2)
struct BrownianDensity {
    double gamma = 0.01;
    double omega0 = 15.0;
    double lambda0 = 5.0;
};

// J(w) = gamma w exp(-w / cutoff)
struct OhmicExpDensity {
    double gamma = 1.0;
    double cutoff = 1.0;
};

using SpectralDensity = std::variant<BrownianDensity, OhmicExpDensity>;

void validate(const SpectralDensity &density);

double evaluate_j(const SpectralDensity &density, double omega);

// Natural frequency scale: omega0 for Brownian, the cutoff for Ohmic.
double frequency_scale(const SpectralDensity &density);

struct RcParameters {
    double lambda = 0.0;
    double omega = 0.0;
    // Estimated relative error of the moment ratio (quadrature + tail).
    double error_estimate = 0.0;
    // Upper end of the integration window actually used.
    double omega_max = 0.0;
    double first_moment = 0.0; // int w J(w) dw
    double third_moment = 0.0; // int w^3 J(w) dw
};

// Reaction-coordinate frequency and coupling from the moments of J:
//   omega^2 = int w^3 J / int w J,   lambda^2 = (1/omega) int w J.
// The window starts at 20 * frequency_scale and is doubled until the next
// doubling adds less than quad_tol (relative) to both moments. Throws
// QuadratureError carrying the achieved error estimate when the moments do not
// settle, which is the case for densities whose third moment diverges.
RcParameters rc_parameters(const SpectralDensity &density, double quad_tol = 1e-10);

// Same moments restricted to the finite window [0, omega_max], no tail check.
RcParameters rc_parameters_on_window(const SpectralDensity &density, double omega_max, double quad_tol = 1e-10);

} // namespace rcthermo
