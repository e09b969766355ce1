#include "qsd/model_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "qsd/errors.hpp"

namespace qsd {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw config_error(config_errc::unknown_key, where + "." + it.key());
    }
}

double require_number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key))
        throw config_error(config_errc::missing_field, where + "." + key);
    const json& v = obj.at(key);
    if (!v.is_number())
        throw config_error(config_errc::bad_value, where + "." + key + " must be a number");
    return v.get<double>();
}

double number_or(const json& obj, const std::string& where, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number())
        throw config_error(config_errc::bad_value, where + "." + key + " must be a number");
    return v.get<double>();
}

long require_integer(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key))
        throw config_error(config_errc::missing_field, where + "." + key);
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw config_error(config_errc::bad_value, where + "." + key + " must be an integer");
    return v.get<long>();
}

cxd parse_complex(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw config_error(config_errc::bad_value, where + " must be [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
}

bath_spec parse_bath(const json& b) {
    reject_unknown_keys(b, "bath",
                        {"kind", "xi", "omega_c", "omega_0", "temperature", "lambda_kappa",
                         "big_omega0", "gamma_damp"});
    bath_spec spec;
    if (!b.contains("kind"))
        throw config_error(config_errc::missing_field, "bath.kind");
    const std::string kind = b.at("kind").is_string() ? b.at("kind").get<std::string>() : "";
    if (kind == "ohmic")
        spec.kind = bath_kind::ohmic;
    else if (kind == "effective")
        spec.kind = bath_kind::effective;
    else
        throw config_error(config_errc::bad_value, "bath.kind must be \"ohmic\" or \"effective\"");

    spec.xi = require_number(b, "bath", "xi");
    spec.omega_c = require_number(b, "bath", "omega_c");
    spec.omega_0 = require_number(b, "bath", "omega_0");
    spec.temperature = require_number(b, "bath", "temperature");

    if (spec.xi < 0)
        throw config_error(config_errc::out_of_range, "bath.xi must be >= 0");
    if (!(spec.omega_c > 0))
        throw config_error(config_errc::out_of_range, "bath.omega_c must be > 0");
    if (spec.omega_0 < 0 || spec.omega_0 >= spec.omega_c)
        throw config_error(config_errc::out_of_range, "bath.omega_0 must satisfy 0 <= omega_0 < omega_c");
    if (!(spec.temperature > 0))
        throw config_error(config_errc::out_of_range, "bath.temperature must be > 0");

    const bool has_eff = b.contains("lambda_kappa") || b.contains("big_omega0") || b.contains("gamma_damp");
    if (spec.kind == bath_kind::ohmic) {
        if (has_eff)
            throw config_error(config_errc::inconsistent_bath,
                               "ohmic bath with effective-only fields (lambda_kappa/big_omega0/gamma_damp)");
    } else {
        if (!b.contains("lambda_kappa") || !b.contains("big_omega0") || !b.contains("gamma_damp"))
            throw config_error(config_errc::inconsistent_bath,
                               "effective bath needs lambda_kappa, big_omega0 and gamma_damp");
        spec.lambda_kappa = require_number(b, "bath", "lambda_kappa");
        spec.big_omega0 = require_number(b, "bath", "big_omega0");
        spec.gamma_damp = require_number(b, "bath", "gamma_damp");
        if (spec.lambda_kappa < 0)
            throw config_error(config_errc::out_of_range, "bath.lambda_kappa must be >= 0");
        if (!(spec.big_omega0 > 0))
            throw config_error(config_errc::out_of_range, "bath.big_omega0 must be > 0");
        if (!(spec.gamma_damp > 0))
            throw config_error(config_errc::out_of_range, "bath.gamma_damp must be > 0");
    }
    return spec;
}

initial_state parse_initial(const json& ini) {
    reject_unknown_keys(ini, "initial", {"amplitudes", "matrix"});
    const bool has_amp = ini.contains("amplitudes");
    const bool has_mat = ini.contains("matrix");
    if (has_amp == has_mat)
        throw config_error(has_amp ? config_errc::bad_value : config_errc::missing_field,
                           "initial needs exactly one of amplitudes / matrix");

    initial_state state;
    if (has_amp) {
        const json& a = ini.at("amplitudes");
        if (!a.is_array() || a.size() != 2)
            throw config_error(config_errc::bad_value, "initial.amplitudes must be [[re,im],[re,im]]");
        const cxd c0 = parse_complex(a[0], "initial.amplitudes[0]");
        const cxd c1 = parse_complex(a[1], "initial.amplitudes[1]");
        const double norm2 = std::norm(c0) + std::norm(c1);
        if (std::abs(norm2 - 1.0) > 1e-12)
            throw config_error(config_errc::out_of_range, "initial.amplitudes must be normalized to 1e-12");
        state.amplitudes = {c0, c1};
        state.rho = {{{c0 * std::conj(c0), c0 * std::conj(c1)},
                      {c1 * std::conj(c0), c1 * std::conj(c1)}}};
        return state;
    }

    const json& m = ini.at("matrix");
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 || !m[1].is_array() ||
        m[1].size() != 2)
        throw config_error(config_errc::bad_value, "initial.matrix must be a 2x2 array of [re,im]");
    Mat2 rho;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            rho[r][c] = parse_complex(m[r][c], "initial.matrix");
    if (std::abs(rho[0][1] - std::conj(rho[1][0])) > 1e-12 || std::abs(rho[0][0].imag()) > 1e-12 ||
        std::abs(rho[1][1].imag()) > 1e-12)
        throw config_error(config_errc::out_of_range, "initial.matrix must be hermitian");
    if (std::abs(rho[0][0] + rho[1][1] - 1.0) > 1e-12)
        throw config_error(config_errc::out_of_range, "initial.matrix must have unit trace");
    // Hermitian 2x2 eigenvalues: mean +- radius.
    const double mean = 0.5 * (rho[0][0].real() + rho[1][1].real());
    const double rad = std::sqrt(0.25 * std::pow(rho[0][0].real() - rho[1][1].real(), 2) +
                                 std::norm(rho[0][1]));
    if (mean - rad < -1e-12 || mean + rad > 1.0 + 1e-12)
        throw config_error(config_errc::out_of_range, "initial.matrix eigenvalues must lie in [0, 1]");
    state.rho = rho;
    return state;
}

scenario base_figure_scenario() {
    scenario s;
    s.system.epsilon = 10.0;
    s.system.delta = 1.0;
    s.bath.kind = bath_kind::ohmic;
    s.bath.xi = 0.01;
    s.bath.omega_c = 100.0;
    s.bath.omega_0 = 11.0;
    s.bath.temperature = 0.01;
    s.grid.dt = 0.6 / s.bath.omega_c;
    s.grid.n_steps = static_cast<long>(std::ceil(10.0 / s.grid.dt));
    s.grid.k_max = 3;
    const auto amps = standard_initial_states()[0];
    s.initial.amplitudes = amps;
    s.initial.rho = {{{amps[0] * std::conj(amps[0]), amps[0] * std::conj(amps[1])},
                      {amps[1] * std::conj(amps[0]), amps[1] * std::conj(amps[1])}}};
    s.normalize_trace = true;
    return s;
}

void make_effective(scenario& s, double lambda_kappa, double big_omega0) {
    s.bath.kind = bath_kind::effective;
    s.bath.lambda_kappa = lambda_kappa;
    s.bath.big_omega0 = big_omega0;
    s.bath.gamma_damp = 52.0;  // 2.6e11 rad/s over Delta_ref = 5e9 rad/s
}

std::string fmt_param(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void set_initial(scenario& s, const std::array<cxd, 2>& amps) {
    s.initial.amplitudes = amps;
    s.initial.rho = {{{amps[0] * std::conj(amps[0]), amps[0] * std::conj(amps[1])},
                      {amps[1] * std::conj(amps[0]), amps[1] * std::conj(amps[1])}}};
}

}  // namespace

scenario validate_scenario(const json& doc, std::vector<std::string>* warnings) {
    if (!doc.is_object())
        throw config_error(config_errc::bad_value, "config root must be a JSON object");
    reject_unknown_keys(doc, "config",
                        {"label", "system", "bath", "grid", "initial", "normalize_trace"});

    scenario s;
    if (doc.contains("label")) {
        if (!doc.at("label").is_string())
            throw config_error(config_errc::bad_value, "label must be a string");
        s.label = doc.at("label").get<std::string>();
    } else {
        s.label = "run";
    }

    if (!doc.contains("system"))
        throw config_error(config_errc::missing_field, "system");
    const json& sys = doc.at("system");
    reject_unknown_keys(sys, "system", {"epsilon", "delta", "delta_ref_hz"});
    s.system.epsilon = require_number(sys, "system", "epsilon");
    s.system.delta = number_or(sys, "system", "delta", 1.0);
    s.system.delta_ref_hz = number_or(sys, "system", "delta_ref_hz", 5e9);
    if (s.system.delta < 0)
        throw config_error(config_errc::out_of_range, "system.delta must be >= 0");
    if (!(s.system.delta_ref_hz > 0))
        throw config_error(config_errc::out_of_range, "system.delta_ref_hz must be > 0");

    if (!doc.contains("bath"))
        throw config_error(config_errc::missing_field, "bath");
    s.bath = parse_bath(doc.at("bath"));

    if (!doc.contains("grid"))
        throw config_error(config_errc::missing_field, "grid");
    const json& g = doc.at("grid");
    reject_unknown_keys(g, "grid", {"dt", "n_steps", "k_max"});
    s.grid.dt = number_or(g, "grid", "dt", 0.6 / s.bath.omega_c);
    if (!(s.grid.dt > 0))
        throw config_error(config_errc::out_of_range, "grid.dt must be > 0");
    s.grid.n_steps = g.contains("n_steps") ? require_integer(g, "grid", "n_steps")
                                           : static_cast<long>(std::ceil(10.0 / s.grid.dt));
    if (s.grid.n_steps < 1)
        throw config_error(config_errc::out_of_range, "grid.n_steps must be >= 1");
    s.grid.k_max = static_cast<int>(require_integer(g, "grid", "k_max"));
    if (s.grid.k_max < 1 || s.grid.k_max > s.grid.n_steps)
        throw config_error(config_errc::out_of_range, "grid.k_max must satisfy 1 <= k_max <= n_steps");

    const double dtwc = s.grid.dt * s.bath.omega_c;
    if (dtwc > 1.0)
        throw config_error(config_errc::out_of_range, "grid.dt * omega_c must be <= 1");
    if (dtwc > 0.6 * (1 + 1e-12) && warnings)
        warnings->push_back("dt * omega_c = " + std::to_string(dtwc) +
                            " exceeds 0.6; the splitting error grows with this product");

    if (!doc.contains("initial"))
        throw config_error(config_errc::missing_field, "initial");
    s.initial = parse_initial(doc.at("initial"));

    if (doc.contains("normalize_trace")) {
        if (!doc.at("normalize_trace").is_boolean())
            throw config_error(config_errc::bad_value, "normalize_trace must be a boolean");
        s.normalize_trace = doc.at("normalize_trace").get<bool>();
    }
    return s;
}

scenario load_scenario(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw config_error(config_errc::bad_value, path + ": " + e.what());
    }
    return validate_scenario(doc, warnings);
}

bath_spec load_bath_spec(const std::string& path, std::string* label) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw config_error(config_errc::bad_value, path + ": " + e.what());
    }
    if (!doc.is_object())
        throw config_error(config_errc::bad_value, "config root must be a JSON object");
    reject_unknown_keys(doc, "config",
                        {"label", "system", "bath", "grid", "initial", "normalize_trace"});
    if (!doc.contains("bath"))
        throw config_error(config_errc::missing_field, "bath");
    if (label && doc.contains("label") && doc.at("label").is_string())
        *label = doc.at("label").get<std::string>();
    return parse_bath(doc.at("bath"));
}

std::array<std::array<cxd, 2>, 7> standard_initial_states() {
    std::array<std::array<cxd, 2>, 7> out;
    const double denoms[6] = {2.0, 4.0, 7.0, 13.0, 30.0, 60.0};
    for (int i = 0; i < 6; ++i)
        out[i] = {cxd(std::sqrt(1.0 - 1.0 / denoms[i]), 0.0), cxd(std::sqrt(1.0 / denoms[i]), 0.0)};
    out[6] = {cxd(1.0, 0.0), cxd(0.0, 0.0)};
    return out;
}

std::vector<scenario> figure_preset(const std::string& name) {
    return figure_preset(name, {});
}

std::vector<scenario> figure_preset(const std::string& name, const std::vector<double>& sweep) {
    std::vector<scenario> list;
    const auto states = standard_initial_states();
    if (!sweep.empty() && name != "fig4" && name != "fig5")
        throw config_error(config_errc::bad_value, "sweep values only apply to fig4 and fig5");

    if (name == "fig1") {
        scenario sb = base_figure_scenario();
        sb.label = "fig1_sb_response";
        list.push_back(sb);
        scenario sib = base_figure_scenario();
        make_effective(sib, 1050.0, 10.0);
        sib.label = "fig1_sib_response";
        list.push_back(sib);
        return list;
    }

    if (name == "fig2") {
        for (const char* model : {"sb", "sib"}) {
            const bool eff = std::string(model) == "sib";
            for (int k : {2, 3, 4}) {
                for (double eps : {10.0, 1.0}) {
                    scenario s = base_figure_scenario();
                    if (eff) make_effective(s, 1050.0, 10.0);
                    s.grid.k_max = k;
                    s.system.epsilon = eps;
                    s.label = std::string("fig2_") + model + "_k" + std::to_string(k) +
                              "_eps" + std::to_string(static_cast<int>(eps));
                    list.push_back(s);
                }
            }
        }
        return list;
    }

    if (name == "fig3") {
        for (const char* model : {"sb", "sib"}) {
            const bool eff = std::string(model) == "sib";
            for (int i = 0; i < 7; ++i) {
                scenario s = base_figure_scenario();
                if (eff) make_effective(s, 1050.0, 10.0);
                set_initial(s, states[i]);
                s.label = std::string("fig3_") + model + "_xi" + std::to_string(i + 1);
                list.push_back(s);
            }
        }
        return list;
    }

    if (name == "fig4") {
        const std::vector<double> lks = sweep.empty() ? std::vector<double>{700.0, 1050.0, 1500.0} : sweep;
        for (double lk : lks) {
            for (double eps : {10.0, 1.0}) {
                scenario s = base_figure_scenario();
                make_effective(s, lk, 10.0);
                s.system.epsilon = eps;
                s.label = "fig4_lk" + fmt_param(lk) + "_eps" + fmt_param(eps);
                list.push_back(s);
            }
        }
        return list;
    }

    if (name == "fig5") {
        const std::vector<double> oms = sweep.empty() ? std::vector<double>{10.0, 9.0, 8.0} : sweep;
        for (double om : oms) {
            for (double eps : {10.0, 1.0}) {
                scenario s = base_figure_scenario();
                make_effective(s, 1050.0, om);
                s.system.epsilon = eps;
                s.label = "fig5_om" + fmt_param(om) + "_eps" + fmt_param(eps);
                list.push_back(s);
            }
        }
        return list;
    }

    throw config_error(config_errc::unknown_preset, name);
}

}  // namespace qsd
