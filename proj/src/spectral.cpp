#include "qsd/spectral.hpp"

#include <cmath>
#include <numbers>

#include "qsd/errors.hpp"

namespace qsd {

using std::numbers::pi;

double j_ohmic(double omega, const bath_spec& spec) {
    return 0.5 * pi * spec.xi * omega * std::exp(-omega / spec.omega_c);
}

double j_effective(double omega, const bath_spec& spec) {
    const double w2 = omega * omega;
    const double o2 = spec.big_omega0 * spec.big_omega0;
    const double den = (w2 - o2) * (w2 - o2) + 4.0 * spec.gamma_damp * spec.gamma_damp * w2;
    const double lk2 = spec.lambda_kappa * spec.lambda_kappa;
    return 0.5 * pi * lk2 * spec.xi * omega * o2 * o2 / den;
}

double j_value(double omega, const bath_spec& spec) {
    if (omega <= 0.0) return 0.0;
    if (spec.window && (omega < spec.omega_0 || omega > spec.omega_c)) return 0.0;
    return spec.kind == bath_kind::ohmic ? j_ohmic(omega, spec) : j_effective(omega, spec);
}

mapping_params consistent_gauge(const bath_spec& spec) {
    mapping_params mp;
    mp.mass = 1.0;
    mp.mu = 1.0;
    mp.eta = 0.5 * pi * spec.xi;
    mp.kappa = std::sqrt(2.0 * spec.gamma_damp / mp.eta);
    mp.lambda = spec.lambda_kappa / mp.kappa;
    mp.big_omega0 = spec.big_omega0;
    return mp;
}

std::complex<double> l_of_omega(double omega, const mapping_params& mp,
                                std::optional<double> cutoff) {
    const std::complex<double> damping(0.0, mp.eta * mp.kappa * mp.kappa * omega);
    const double atten = cutoff ? std::exp(-omega / *cutoff) : 1.0;
    return -mp.mass * omega * omega + atten * damping;
}

double j_eff_from_mapping(double omega, const mapping_params& mp, double eps_im,
                          std::optional<double> cutoff) {
    auto at_eps = [&](double eps) {
        const std::complex<double> z(omega, -eps);
        const double atten = cutoff ? std::exp(-omega / *cutoff) : 1.0;
        const std::complex<double> L =
            -mp.mass * z * z + atten * std::complex<double>(0.0, 1.0) * (mp.eta * mp.kappa * mp.kappa) * z;
        const std::complex<double> den = mp.mass * mp.big_omega0 * mp.big_omega0 + L;
        if (std::abs(den) < 1e-14)
            throw numeric_error(numeric_errc::singular_denominator,
                                "oscillator kernel pole at omega = " + std::to_string(omega));
        const std::complex<double> K =
            -mp.mu * z * z +
            mp.mass * mp.big_omega0 * mp.big_omega0 * mp.lambda * mp.lambda * L / den;
        return K.imag();
    };
    return richardson_limit(at_eps, eps_im);
}

double richardson_limit(const std::function<double(double)>& f, double eps) {
    return 2.0 * f(0.5 * eps) - f(eps);
}

}  // namespace qsd
