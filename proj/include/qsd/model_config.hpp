#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qsd {

using cxd = std::complex<double>;
using Mat2 = std::array<std::array<cxd, 2>, 2>;

// All quantities are dimensionless with hbar = k_B = 1: frequencies in units of
// the tunneling scale Delta, time in 1/Delta, temperature in hbar*Delta/k_B.
// delta_ref_hz is the absolute Delta in rad/s, used for reporting only.

struct system_params {
    double epsilon = 0.0;       // bias, units of Delta
    double delta = 1.0;         // tunneling, units of Delta (normally 1)
    double delta_ref_hz = 5e9;  // absolute scale, display only
};

enum class bath_kind { ohmic, effective };

struct bath_spec {
    bath_kind kind = bath_kind::ohmic;
    double xi = 0.0;           // Kondo parameter
    double omega_c = 0.0;      // exponential / upper hard cutoff
    double omega_0 = 0.0;      // lower hard cutoff
    double temperature = 0.0;  // T, so beta = 1/T
    // effective kind only:
    double lambda_kappa = 0.0;  // product lambda*kappa
    double big_omega0 = 0.0;    // intermediate-oscillator frequency Omega_0
    double gamma_damp = 0.0;    // its damping Gamma
    // The hard window [omega_0, omega_c] multiplies every bath integral; tests
    // disable it to reach closed-form limits.  Not part of the config format.
    bool window = true;

    double beta() const { return 1.0 / temperature; }
};

struct time_grid {
    double dt = 0.0;
    long n_steps = 0;
    int k_max = 0;  // memory depth in steps
};

struct initial_state {
    // Either a pure state (c0, c1) or a general density matrix; rho is always
    // filled, amplitudes only when the pure form was given.
    std::optional<std::array<cxd, 2>> amplitudes;
    Mat2 rho{};
};

struct scenario {
    std::string label;
    system_params system;
    bath_spec bath;
    time_grid grid;
    initial_state initial;
    bool normalize_trace = true;
};

// Parses and validates one configuration document.  Unknown keys are rejected.
// Defaults: delta = 1, delta_ref_hz = 5e9, dt = 0.6/omega_c,
// n_steps = ceil(10/dt), normalize_trace = true.
// Throws config_error (MissingField / UnknownKey / OutOfRange / InconsistentBath
// / BadValue).  Non-fatal observations (dt*omega_c above 0.6) go to *warnings.
scenario validate_scenario(const nlohmann::json& doc, std::vector<std::string>* warnings = nullptr);
scenario load_scenario(const std::string& path, std::vector<std::string>* warnings = nullptr);

// Lenient variant for the response/spectrum subcommands: only the bath object
// (plus optional label) is required; other scenario keys are allowed and ignored.
bath_spec load_bath_spec(const std::string& path, std::string* label = nullptr);

// Scenario lists behind the five shipped figure reproductions.
// fig1: bath response comparison; fig2: {SB,SIB} x k_max {2,3,4} x bias {10,1};
// fig3: the seven initial states; fig4: coupling sweep; fig5: Omega_0 sweep.
// Deterministic: identical calls produce identical lists.
std::vector<scenario> figure_preset(const std::string& name);

// Same, with the swept parameter replaced: fig4 sweeps lambda_kappa, fig5 sweeps
// big_omega0. Any other preset rejects a non-empty sweep.
std::vector<scenario> figure_preset(const std::string& name, const std::vector<double>& sweep);

// The seven pure initial states used by fig3, |xi_1> .. |xi_7>.
std::array<std::array<cxd, 2>, 7> standard_initial_states();

}  // namespace qsd
