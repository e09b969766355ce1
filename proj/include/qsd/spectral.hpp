#pragma once

// Spectral densities for the two bath models, plus the oscillator-mapping
// route that produces the effective density from first principles. All
// frequencies are in units of the reference tunneling splitting.

#include <complex>
#include <functional>
#include <optional>

#include "qsd/model_config.hpp"

namespace qsd {

// Ohmic density with exponential cutoff: (pi/2) xi w exp(-w/omega_c).
double j_ohmic(double omega, const bath_spec& spec);

// Lorentzian-filtered density of the damped-oscillator model:
// (pi/2) (lambda kappa)^2 xi w Omega0^4 / [(w^2 - Omega0^2)^2 + 4 Gamma^2 w^2].
double j_effective(double omega, const bath_spec& spec);

// Dispatch on spec.kind, applying the measurement window [omega_0, omega_c]
// when spec.window is set. Zero outside the window, zero for omega <= 0.
double j_value(double omega, const bath_spec& spec);

// Parameters of the underlying oscillator coupling, fixed to the gauge
// M = mu = 1 so the remaining freedom lands in kappa and lambda.
struct mapping_params {
    double mass = 1.0;       // M, oscillator mass
    double mu = 1.0;         // mass of the mapped mode
    double eta = 0.0;        // friction coefficient of the oscillator's bath
    double kappa = 0.0;      // oscillator-bath coupling scale
    double lambda = 0.0;     // spin-oscillator coupling
    double big_omega0 = 0.0; // oscillator frequency
};

// Build the gauge-fixed mapping that reproduces spec's effective density:
// eta = pi xi / 2, kappa = sqrt(2 gamma_damp / eta), lambda = lambda_kappa / kappa.
mapping_params consistent_gauge(const bath_spec& spec);

// Retarded kernel of the dissipative oscillator, L(w) = -M w^2 + i eta kappa^2 w.
// A finite cutoff multiplies the damping term by exp(-w/cutoff).
std::complex<double> l_of_omega(double omega, const mapping_params& mp,
                                std::optional<double> cutoff = std::nullopt);

// Effective density from the mapping: Im of the mapped force-force kernel
// evaluated just below the real axis (omega -> omega - i eps_im).
double j_eff_from_mapping(double omega, const mapping_params& mp, double eps_im = 1e-8,
                          std::optional<double> cutoff = std::nullopt);

// Richardson extrapolation of f(eps) as eps -> 0+, one step: 2 f(eps/2) - f(eps).
double richardson_limit(const std::function<double(double)>& f, double eps);

}  // namespace qsd
