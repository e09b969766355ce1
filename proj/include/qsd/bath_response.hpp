#pragma once

// Bath autocorrelation alpha(t) = (1/pi) Int J(w) [coth(beta w/2) cos(wt) - i sin(wt)] dw
// over the measurement window, plus the memory-time estimate used to size the
// propagator's history depth.

#include <complex>
#include <functional>
#include <vector>

#include "qsd/model_config.hpp"

namespace qsd {

struct response_value {
    std::complex<double> value;
    double error = 0.0;
};

struct response_samples {
    std::vector<double> times;
    std::vector<std::complex<double>> values;
    std::vector<double> quad_error;
};

// alpha(t) with an estimated absolute error bound. Negative t evaluates the
// conjugate of the positive-time value. With the window disabled the integral
// runs to a cutoff-scaled upper bound; for the Lorentzian-filtered density the
// 1/w^3 tail beyond that bound is added to the reported error, so only the
// windowed and windowless-Ohmic modes keep the bound at or below tol.
response_value response_at(double t, const bath_spec& spec, double beta, double tol = 1e-10);

response_samples sample_response(const bath_spec& spec, double beta, double t_max,
                                 double grid_step, double tol = 1e-10);

// Smallest grid time after which |alpha| stays below threshold * |alpha(0)|
// through t_max, on a grid of step 1/(4 omega_c).
double memory_time(const bath_spec& spec, double beta, double threshold, double t_max);

// Same scan against an arbitrary envelope, for tests and reuse.
double memory_time(const std::function<std::complex<double>(double)>& alpha, double grid_step,
                   double threshold, double t_max);

// coth(x) with the small-x Laurent form and the large-x saturation to 1.
double coth_series_safe(double x);

}  // namespace qsd
