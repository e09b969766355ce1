#pragma once

// Iterative tensor propagation of the reduced density matrix. The augmented
// tensor holds one complex weight per path-segment history of depth k_max;
// each step folds the oldest pair index into the newest one through the
// influence coefficients and the free propagator.

#include <array>
#include <complex>
#include <vector>

#include "qsd/influence.hpp"
#include "qsd/kernels.hpp"
#include "qsd/model_config.hpp"

namespace qsd {

// exp(-i H dt) for H = (delta/2) sigma_x + (epsilon/2) sigma_z.
Mat2 free_propagator(const system_params& sys, double dt);

// max |(K^dagger K - I)_{ij}|
double unitarity_defect(const Mat2& k);

// Normalized exp(-beta H) for the same H; the long-time populations head here
// when the bath drives full relaxation.
Mat2 thermal_reference(const system_params& sys, double beta);

// Pair-space propagator: g[4*new + old] = K[a_n][a_o] conj(K[b_n][b_o]).
std::array<std::complex<double>, 16> pair_propagator(const Mat2& k);

struct engine_options {
    bool normalize = true;
    int threads = 1;  // clamped to [1, 4]; the four fresh pair values split across threads
    kernels::variant simd = kernels::variant::auto_pick;
    std::size_t max_entries = std::size_t{1} << 26;  // tensor entries, 4^k_max must fit
};

struct trajectory {
    std::vector<double> times;
    std::vector<Mat2> rho;                          // normalized unless options say otherwise
    std::vector<std::complex<double>> raw_trace;    // tensor trace before normalization
};

trajectory itm_propagate(const scenario& sc, const eta_table& eta, const engine_options& opts);

struct trajectory_diagnostics {
    double max_hermiticity_defect = 0.0;
    double max_raw_trace_drift = 0.0;
    double min_eigenvalue = 0.0;
};

trajectory_diagnostics diagnostics(const trajectory& traj);

// Wall-clock seconds of single steady-phase steps against a synthetic
// influence table, one entry per repetition. Scaling probes read medians.
std::vector<double> steady_step_seconds(int k_max, int reps, const engine_options& opts);

}  // namespace qsd
