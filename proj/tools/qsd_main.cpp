// qsd: quantum-dissipative-system runner.
//
// Subcommands: run (one config), preset (figure batches), response (bath
// autocorrelation to stdout), spectrum (spectral density to stdout).

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsd/errors.hpp"
#include "qsd/experiment.hpp"
#include "qsd/kernels.hpp"
#include "qsd/model_config.hpp"
#include "qsd/version.hpp"

namespace {

std::vector<double> parse_sweep(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw qsd::config_error(qsd::config_errc::bad_value,
                                    "sweep value \"" + item + "\" is not a number");
        }
    }
    if (out.empty())
        throw qsd::config_error(qsd::config_errc::bad_value, "empty sweep list");
    return out;
}

void print_summary_line(const qsd::run_summary& s) {
    auto field = [](const std::optional<double>& v, const std::string& note) {
        if (v) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", *v);
            return std::string(buf);
        }
        return note.empty() ? std::string("-") : "absent (" + note + ")";
    };
    std::cout << s.label << ": tau1 = " << field(s.decay.tau1, s.decay.tau1_note)
              << ", tau2 = " << field(s.decay.tau2, s.decay.tau2_note)
              << ", max raw-trace drift = " << s.max_trace_drift << ", " << s.csv_name << " ("
              << s.seconds << " s)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qubit decoherence via iterative influence-tensor propagation"};
    app.set_version_flag("--version", qsd::version_string);
    app.require_subcommand(1);

    std::string config_path, out_dir, preset_name, sweep_csv;
    int jobs = 1;
    bool no_normalize = false;
    double t_max = 0.3;

    CLI::App* run = app.add_subcommand("run", "Propagate one scenario config");
    run->add_option("--config", config_path, "scenario JSON")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--jobs", jobs, "tensor-update threads (1-4)");
    run->add_flag("--no-normalize", no_normalize, "keep the raw tensor readout");

    CLI::App* preset = app.add_subcommand("preset", "Run a figure preset batch");
    preset->add_option("name", preset_name, "fig1..fig5")->required();
    preset->add_option("--out", out_dir, "output directory")->required();
    preset->add_option("--sweep", sweep_csv, "override swept values, comma separated");
    preset->add_option("--jobs", jobs, "concurrent scenarios");

    CLI::App* response = app.add_subcommand("response", "Bath response series to stdout");
    response->add_option("--config", config_path, "config JSON with a bath block")->required();
    response->add_option("--t-max", t_max, "end of the time grid");

    CLI::App* spectrum = app.add_subcommand("spectrum", "Windowed spectral density to stdout");
    spectrum->add_option("--config", config_path, "config JSON with a bath block")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        qsd::run_options opt;
        opt.simd = qsd::kernels::env_variant();

        if (*run) {
            std::vector<std::string> warnings;
            const qsd::scenario sc = qsd::load_scenario(config_path, &warnings);
            for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
            opt.engine_threads = jobs;
            opt.force_raw = no_normalize;
            print_summary_line(qsd::run_scenario_to_dir(sc, out_dir, opt));
        } else if (*preset) {
            const std::vector<double> sweep =
                sweep_csv.empty() ? std::vector<double>{} : parse_sweep(sweep_csv);
            opt.jobs = jobs;
            qsd::preset_to_dir(preset_name, sweep, out_dir, opt);
            std::cout << preset_name << " written to " << out_dir << '\n';
        } else if (*response) {
            std::string label;
            const qsd::bath_spec spec = qsd::load_bath_spec(config_path, &label);
            qsd::response_csv(std::cout, spec, t_max, label);
        } else if (*spectrum) {
            std::string label;
            const qsd::bath_spec spec = qsd::load_bath_spec(config_path, &label);
            qsd::spectrum_csv(std::cout, spec, label);
        }
    } catch (const qsd::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const qsd::numeric_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qsd::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
