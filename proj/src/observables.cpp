#include "qsd/observables.hpp"

#include <cmath>
#include <numbers>

#include "qsd/bath_response.hpp"
#include "qsd/errors.hpp"
#include "qsd/quadrature.hpp"
#include "qsd/spectral.hpp"

namespace qsd {

using cxd = std::complex<double>;
using std::numbers::pi;

namespace {

struct crossing {
    std::optional<double> t;
    long bracket = -1;
};

crossing coherence_crossing(const trajectory& traj) {
    const double c0 = std::abs(traj.rho.front()[0][1]);
    if (c0 < 1e-14)
        throw numeric_error(numeric_errc::zero_initial_coherence,
                            "|rho12(0)| < 1e-14, no coherence to track");
    const double target = c0 / std::numbers::e;
    for (std::size_t i = 1; i < traj.rho.size(); ++i) {
        const double cur = std::abs(traj.rho[i][0][1]);
        if (cur < target) {
            const double prev = std::abs(traj.rho[i - 1][0][1]);
            const double frac = (prev - target) / (prev - cur);
            return {traj.times[i - 1] + frac * (traj.times[i] - traj.times[i - 1]),
                    static_cast<long>(i) - 1};
        }
    }
    return {};
}

crossing relaxation_crossing(const trajectory& traj) {
    const std::size_t rows = traj.rho.size();
    const std::size_t tail = std::max<std::size_t>(1, rows / 5);
    double p_inf = 0.0;
    for (std::size_t i = rows - tail; i < rows; ++i) p_inf += traj.rho[i][0][0].real();
    p_inf /= tail;

    const double dev0 = std::abs(traj.rho.front()[0][0].real() - p_inf);
    if (dev0 < 1e-6)
        throw numeric_error(numeric_errc::degenerate_target,
                            "initial population already sits at its long-time value");
    const double thr = dev0 / std::numbers::e;

    std::size_t last_violation = rows;
    for (std::size_t i = rows; i-- > 0;) {
        if (std::abs(traj.rho[i][0][0].real() - p_inf) >= thr) {
            last_violation = i;
            break;
        }
    }
    if (last_violation == rows - 1)
        throw numeric_error(numeric_errc::no_decay,
                            "population deviation still above threshold at the end of the run");
    // dev0 = e * thr > thr, so a violation exists and a crossing follows it.
    const double dj = std::abs(traj.rho[last_violation][0][0].real() - p_inf);
    const double dn = std::abs(traj.rho[last_violation + 1][0][0].real() - p_inf);
    const double frac = (dj - thr) / (dj - dn);
    return {traj.times[last_violation] +
                frac * (traj.times[last_violation + 1] - traj.times[last_violation]),
            static_cast<long>(last_violation)};
}

}  // namespace

std::optional<double> coherence_time(const trajectory& traj) { return coherence_crossing(traj).t; }

double relaxation_time(const trajectory& traj) { return *relaxation_crossing(traj).t; }

decay_report decay_times(const trajectory& traj) {
    decay_report rep;
    try {
        const crossing c = coherence_crossing(traj);
        rep.tau2 = c.t;
        rep.tau2_bracket = c.bracket;
        if (!rep.tau2) rep.tau2_note = "no 1/e crossing within the run";
    } catch (const numeric_error& e) {
        if (e.kind() != numeric_errc::zero_initial_coherence) throw;
        rep.tau2_note = to_string(e.kind());
    }
    try {
        const crossing c = relaxation_crossing(traj);
        rep.tau1 = c.t;
        rep.tau1_bracket = c.bracket;
    } catch (const numeric_error& e) {
        if (e.kind() != numeric_errc::degenerate_target && e.kind() != numeric_errc::no_decay)
            throw;
        rep.tau1_note = to_string(e.kind());
    }
    return rep;
}

cxd dephasing_oracle(const bath_spec& spec, double beta, double eps_bias, cxd rho12_0, double t) {
    double integral = 0.0;
    if (t > 0.0) {
        const double top = spec.kind == bath_kind::effective
                               ? std::max(spec.omega_c, spec.big_omega0)
                               : spec.omega_c;
        quad_options opt;
        opt.abs_tol = 1e-8;
        opt.max_panel_width = pi / (4.0 * top);
        integral = integrate_real(
                       [&](double u) {
                           return (t - u) * response_at(u, spec, beta).value.real();
                       },
                       0.0, t, opt)
                       .value;
    }
    return rho12_0 * std::exp(cxd(-4.0 * integral, -eps_bias * t));
}

std::vector<double> dephasing_exponent_grid(const std::vector<double>& times,
                                            const bath_spec& spec, double beta, double tol) {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        if (t == 0.0) {
            out.push_back(0.0);
            continue;
        }
        double lo, hi;
        if (spec.window) {
            lo = spec.omega_0;
            hi = spec.omega_c;
        } else {
            lo = 0.0;
            hi = spec.kind == bath_kind::ohmic ? 45.0 * spec.omega_c
                                               : 45.0 * std::max(spec.omega_c, spec.big_omega0);
        }
        quad_options opt;
        opt.abs_tol = tol * pi / 4.0;
        opt.max_panel_width = pi / (4.0 * t);
        const double val =
            integrate_real(
                [&](double w) {
                    const double j = j_value(w, spec);
                    if (j == 0.0) return 0.0;
                    const double s = std::sin(0.5 * w * t);
                    return j * coth_series_safe(0.5 * beta * w) * 2.0 * s * s / (w * w);
                },
                lo, hi, opt)
                .value;
        out.push_back(4.0 * val / pi);
    }
    return out;
}

}  // namespace qsd
