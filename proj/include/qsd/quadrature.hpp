#pragma once

// Adaptive Gauss-Legendre integration for the bath integrands. Panels are
// bisected until each one's local error estimate fits inside its share of the
// global tolerance, so the sum of accepted estimates never exceeds abs_tol.

#include <complex>
#include <functional>

namespace qsd {

struct quad_options {
    double abs_tol = 1e-10;
    // Panels never start wider than this; oscillatory integrands set it near a
    // fraction of their period. <= 0 means no cap beyond the initial eighth.
    double max_panel_width = 0.0;
    int max_panels = 1 << 16;
};

struct quad_result {
    std::complex<double> value;
    double error = 0.0;  // accumulated estimate, bounded by abs_tol on success
};

struct real_quad_result {
    double value = 0.0;
    double error = 0.0;
};

quad_result integrate(const std::function<std::complex<double>(double)>& f, double a, double b,
                      const quad_options& opt);

real_quad_result integrate_real(const std::function<double(double)>& f, double a, double b,
                                const quad_options& opt);

}  // namespace qsd
