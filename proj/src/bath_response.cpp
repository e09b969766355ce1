#include "qsd/bath_response.hpp"

#include <cmath>
#include <numbers>

#include "qsd/errors.hpp"
#include "qsd/quadrature.hpp"
#include "qsd/spectral.hpp"

namespace qsd {

using cxd = std::complex<double>;
using std::numbers::pi;

double coth_series_safe(double x) {
    if (x > 20.0) return 1.0;
    if (x < 1e-4) return 1.0 / x + x / 3.0;
    return 1.0 / std::tanh(x);
}

response_value response_at(double t, const bath_spec& spec, double beta, double tol) {
    if (t < 0.0) {
        response_value r = response_at(-t, spec, beta, tol);
        r.value = std::conj(r.value);
        return r;
    }

    double lo, hi, tail = 0.0;
    if (spec.window) {
        lo = spec.omega_0;
        hi = spec.omega_c;
    } else {
        lo = 0.0;
        if (spec.kind == bath_kind::ohmic) {
            hi = 45.0 * spec.omega_c;
            // |integrand| <= 2 J(w) out there; closed-form remainder of w e^{-w/wc}
            tail = spec.xi * spec.omega_c * (hi + spec.omega_c) * std::exp(-hi / spec.omega_c);
        } else {
            hi = 45.0 * std::max(spec.omega_c, spec.big_omega0);
            const double o2 = spec.big_omega0 * spec.big_omega0;
            tail = spec.lambda_kappa * spec.lambda_kappa * spec.xi * o2 * o2 / (2.0 * hi * hi);
        }
    }

    auto integrand = [&](double w) -> cxd {
        const double j = j_value(w, spec);
        if (j == 0.0) return 0.0;
        const double c = coth_series_safe(0.5 * beta * w);
        return j * cxd(c * std::cos(w * t), -std::sin(w * t));
    };

    quad_options opt;
    opt.abs_tol = tol * pi;
    if (t > 0.0) opt.max_panel_width = pi / (4.0 * t);
    const quad_result q = integrate(integrand, lo, hi, opt);
    return {q.value / pi, q.error / pi + tail};
}

response_samples sample_response(const bath_spec& spec, double beta, double t_max,
                                 double grid_step, double tol) {
    response_samples out;
    const long n = static_cast<long>(std::floor(t_max / grid_step + 1e-9));
    out.times.reserve(n + 1);
    out.values.reserve(n + 1);
    out.quad_error.reserve(n + 1);
    for (long i = 0; i <= n; ++i) {
        const double t = i * grid_step;
        const response_value r = response_at(t, spec, beta, tol);
        out.times.push_back(t);
        out.values.push_back(r.value);
        out.quad_error.push_back(r.error);
    }
    return out;
}

double memory_time(const bath_spec& spec, double beta, double threshold, double t_max) {
    auto alpha = [&](double t) { return response_at(t, spec, beta).value; };
    return memory_time(alpha, 0.25 / spec.omega_c, threshold, t_max);
}

double memory_time(const std::function<cxd(double)>& alpha, double grid_step, double threshold,
                   double t_max) {
    const double a0 = std::abs(alpha(0.0));
    if (a0 == 0.0)
        throw numeric_error(numeric_errc::zero_response, "|alpha(0)| = 0, no envelope to scale by");
    const double cut = threshold * a0;

    const long n = static_cast<long>(std::floor(t_max / grid_step + 1e-9));
    long last_violation = 0;  // t = 0 always violates (threshold < 1)
    for (long i = n; i >= 1; --i) {
        if (std::abs(alpha(i * grid_step)) >= cut) {
            last_violation = i;
            break;
        }
    }
    if (last_violation == n)
        throw numeric_error(numeric_errc::no_decay,
                            "|alpha| does not stay below the threshold before t_max");
    return (last_violation + 1) * grid_step;
}

}  // namespace qsd
