#pragma once

// Decay-time extraction from propagated trajectories, and the closed-course
// pure-dephasing references the propagator is checked against.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qsd/model_config.hpp"
#include "qsd/quapi_engine.hpp"

namespace qsd {

// First time |rho12| falls below |rho12(0)|/e, linearly interpolated between
// grid points. Empty when the trajectory never crosses.
std::optional<double> coherence_time(const trajectory& traj);

// First time after which |rho11 - p_inf| stays below |rho11(0) - p_inf|/e,
// with p_inf the mean population over the trailing fifth of the trajectory.
double relaxation_time(const trajectory& traj);

struct decay_report {
    std::optional<double> tau1;
    std::optional<double> tau2;
    std::string tau1_note;  // why tau1 is absent, empty otherwise
    std::string tau2_note;
    long tau1_bracket = -1;  // sample index just before the accepted crossing
    long tau2_bracket = -1;
};

// Both times, with the benign failure modes folded into notes instead of
// exceptions so batch runs can record them per scenario.
decay_report decay_times(const trajectory& traj);

// Exact coherence of the biased system without tunneling:
// rho12(0) e^{-i eps_bias t} exp{-4 Int_0^t (t-u) Re alpha(u) du}, the time
// integral done adaptively over the response function to 1e-8.
std::complex<double> dephasing_oracle(const bath_spec& spec, double beta, double eps_bias,
                                      std::complex<double> rho12_0, double t);

// Dephasing exponent Gamma(t) = (4/pi) Int J coth(beta w/2) (1 - cos wt) / w^2 dw
// per grid time; the frequency-domain route, one windowed integral per point.
std::vector<double> dephasing_exponent_grid(const std::vector<double>& times,
                                            const bath_spec& spec, double beta,
                                            double tol = 1e-10);

}  // namespace qsd
