#include "qsd/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "qsd/bath_response.hpp"
#include "qsd/errors.hpp"
#include "qsd/influence.hpp"
#include "qsd/quapi_engine.hpp"
#include "qsd/spectral.hpp"
#include "qsd/version.hpp"

namespace qsd {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* kind_name(bath_kind k) { return k == bath_kind::ohmic ? "ohmic" : "effective"; }

void bath_header(std::ostream& os, const bath_spec& b) {
    os << "# kind = " << kind_name(b.kind) << "\n";
    os << "# xi = " << fmt(b.xi) << "\n";
    os << "# omega_c = " << fmt(b.omega_c) << "\n";
    os << "# omega_0 = " << fmt(b.omega_0) << "\n";
    os << "# temperature = " << fmt(b.temperature) << "\n";
    if (b.kind == bath_kind::effective) {
        os << "# lambda_kappa = " << fmt(b.lambda_kappa) << "\n";
        os << "# big_omega0 = " << fmt(b.big_omega0) << "\n";
        os << "# gamma_damp = " << fmt(b.gamma_damp) << "\n";
    }
}

void scenario_header(std::ostream& os, const scenario& sc) {
    os << "# label = " << sc.label << "\n";
    os << "# epsilon = " << fmt(sc.system.epsilon) << "\n";
    os << "# delta = " << fmt(sc.system.delta) << "\n";
    os << "# delta_ref_hz = " << fmt(sc.system.delta_ref_hz) << "\n";
    bath_header(os, sc.bath);
    os << "# dt = " << fmt(sc.grid.dt) << "\n";
    os << "# n_steps = " << sc.grid.n_steps << "\n";
    os << "# k_max = " << sc.grid.k_max << "\n";
    os << "# normalize_trace = " << (sc.normalize_trace ? 1 : 0) << "\n";
}

json bath_json(const bath_spec& b) {
    json j{{"kind", kind_name(b.kind)}, {"xi", b.xi},          {"omega_c", b.omega_c},
           {"omega_0", b.omega_0},      {"temperature", b.temperature}};
    if (b.kind == bath_kind::effective) {
        j["lambda_kappa"] = b.lambda_kappa;
        j["big_omega0"] = b.big_omega0;
        j["gamma_damp"] = b.gamma_damp;
    }
    return j;
}

json scenario_json(const scenario& sc) {
    json rho = json::array();
    for (int r = 0; r < 2; ++r) {
        json row = json::array();
        for (int c = 0; c < 2; ++c)
            row.push_back({sc.initial.rho[r][c].real(), sc.initial.rho[r][c].imag()});
        rho.push_back(row);
    }
    return json{{"label", sc.label},
                {"system",
                 {{"epsilon", sc.system.epsilon},
                  {"delta", sc.system.delta},
                  {"delta_ref_hz", sc.system.delta_ref_hz}}},
                {"bath", bath_json(sc.bath)},
                {"grid", {{"dt", sc.grid.dt}, {"n_steps", sc.grid.n_steps}, {"k_max", sc.grid.k_max}}},
                {"initial_rho", rho},
                {"normalize_trace", sc.normalize_trace}};
}

void write_trajectory_csv(const fs::path& path, const scenario& sc, const trajectory& traj) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot write " + path.string());
    scenario_header(os, sc);
    os << "t,rho11_re,rho11_im,rho12_re,rho12_im,rho22_re,rho22_im,abs_rho12,"
          "raw_trace_re,raw_trace_im\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Mat2& r = traj.rho[i];
        os << fmt(traj.times[i]) << ',' << fmt(r[0][0].real()) << ',' << fmt(r[0][0].imag()) << ','
           << fmt(r[0][1].real()) << ',' << fmt(r[0][1].imag()) << ',' << fmt(r[1][1].real()) << ','
           << fmt(r[1][1].imag()) << ',' << fmt(std::abs(r[0][1])) << ','
           << fmt(traj.raw_trace[i].real()) << ',' << fmt(traj.raw_trace[i].imag()) << '\n';
    }
    if (!os) throw io_error("short write on " + path.string());
}

void write_summary_csv(const fs::path& path, const std::vector<run_summary>& rows) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot write " + path.string());
    os << "label,kind,k_max,epsilon,lambda_kappa,big_omega0,tau1,tau1_note,tau2,tau2_note,"
          "max_trace_drift,csv\n";
    for (const run_summary& r : rows) {
        os << r.label << ',' << kind_name(r.kind) << ',' << r.k_max << ',' << fmt(r.epsilon) << ',';
        if (r.kind == bath_kind::effective)
            os << fmt(r.lambda_kappa) << ',' << fmt(r.big_omega0) << ',';
        else
            os << ",,";
        os << (r.decay.tau1 ? fmt(*r.decay.tau1) : "") << ',' << r.decay.tau1_note << ','
           << (r.decay.tau2 ? fmt(*r.decay.tau2) : "") << ',' << r.decay.tau2_note << ','
           << fmt(r.max_trace_drift) << ',' << r.csv_name << '\n';
    }
    if (!os) throw io_error("short write on " + path.string());
}

json summary_to_json(const run_summary& r, const scenario& sc) {
    json j{{"label", r.label},
           {"parameters", scenario_json(sc)},
           {"eta_cache_key", r.eta_key},
           {"duration_seconds", r.seconds},
           {"csv", r.csv_name}};
    if (r.decay.tau1) j["tau1"] = *r.decay.tau1;
    if (!r.decay.tau1_note.empty()) j["tau1_note"] = r.decay.tau1_note;
    if (r.decay.tau2) j["tau2"] = *r.decay.tau2;
    if (!r.decay.tau2_note.empty()) j["tau2_note"] = r.decay.tau2_note;
    j["max_trace_drift"] = r.max_trace_drift;
    return j;
}

void write_manifest(const fs::path& dir, json manifest, const std::vector<std::string>& outputs) {
    manifest["version"] = version_string;
    manifest["outputs"] = outputs;
    for (const std::string& name : outputs) {
        std::error_code ec;
        if (fs::file_size(dir / name, ec) == 0 || ec)
            throw io_error("output file " + name + " is missing or empty");
    }
    std::ofstream os(dir / "manifest.json");
    if (!os) throw io_error("cannot write manifest.json");
    os << manifest.dump(2) << '\n';
    if (!os) throw io_error("short write on manifest.json");
}

run_summary run_core(const scenario& sc, const fs::path& out_dir, const std::string& cache_dir,
                     const run_options& opt) {
    const auto t0 = std::chrono::steady_clock::now();

    const eta_cache_result eta =
        load_or_build_eta(cache_dir, sc.bath, sc.bath.beta(), sc.grid.dt, sc.grid.k_max);

    engine_options eng;
    eng.normalize = sc.normalize_trace && !opt.force_raw;
    eng.threads = opt.engine_threads;
    eng.simd = opt.simd;
    const trajectory traj = itm_propagate(sc, eta.table, eng);

    run_summary sum;
    sum.label = sc.label;
    sum.kind = sc.bath.kind;
    sum.k_max = sc.grid.k_max;
    sum.epsilon = sc.system.epsilon;
    sum.lambda_kappa = sc.bath.lambda_kappa;
    sum.big_omega0 = sc.bath.big_omega0;
    sum.decay = decay_times(traj);
    sum.max_trace_drift = diagnostics(traj).max_raw_trace_drift;
    sum.csv_name = sc.label + ".csv";
    sum.eta_key = eta.key;

    write_trajectory_csv(out_dir / sum.csv_name, sc, traj);
    sum.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sum;
}

void write_response_series(const fs::path& path, const scenario& sc, double t_max) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot write " + path.string());
    response_csv(os, sc.bath, t_max, sc.label);
    if (!os) throw io_error("short write on " + path.string());
}

constexpr const char* PLOT_SCRIPT = R"PY(#!/usr/bin/env python3
"""Plot the CSV series in this directory.

Usage: python3 plot.py [output.png]
"""
import glob
import os
import sys


def read_series(path):
    header, rows = None, []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if header is None:
                header = parts
            else:
                rows.append([float(x) if x else float("nan") for x in parts])
    if header is None:
        return {}
    return {name: [row[i] for row in rows] for i, name in enumerate(header)}


def main():
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is required to plot (pip install matplotlib)")

    here = os.path.dirname(os.path.abspath(__file__))
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "figure.png")

    fig, (left, right) = plt.subplots(1, 2, figsize=(11, 4))
    for path in sorted(glob.glob(os.path.join(here, "*.csv"))):
        name = os.path.splitext(os.path.basename(path))[0]
        if name == "summary":
            continue
        cols = read_series(path)
        if "abs_rho12" in cols:
            left.plot(cols["t"], cols["abs_rho12"], label=name)
            right.plot(cols["t"], cols["rho11_re"], label=name)
            left.set_ylabel(r"$|\rho_{12}|$")
            right.set_ylabel(r"$\rho_{11}$")
        elif "abs_alpha" in cols:
            left.plot(cols["t"], cols["re_alpha"], label=name)
            right.plot(cols["t"], cols["im_alpha"], label=name)
            left.set_ylabel(r"Re $\alpha$")
            right.set_ylabel(r"Im $\alpha$")
        elif "j_value" in cols:
            left.plot(cols["omega"], cols["j_value"], label=name)
            left.set_ylabel(r"$J(\omega)$")
    for ax in (left, right):
        ax.set_xlabel("t")
        ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
)PY";

}  // namespace

std::string cache_dir_for(const std::string& out_dir) {
    if (const char* env = std::getenv("QSD_CACHE_DIR"); env && *env) return env;
    return (fs::path(out_dir) / ".qsd_cache").string();
}

run_summary run_scenario_to_dir(const scenario& sc, const std::string& out_dir,
                                const run_options& opt) {
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + out_dir);

    const run_summary sum = run_core(sc, dir, cache_dir_for(out_dir), opt);
    write_summary_csv(dir / "summary.csv", {sum});

    json manifest{{"command", "run"}, {"label", sum.label}, {"duration_seconds", sum.seconds}};
    manifest["scenarios"] = json::array({summary_to_json(sum, sc)});
    write_manifest(dir, std::move(manifest), {sum.csv_name, "summary.csv"});
    return sum;
}

void preset_to_dir(const std::string& name, const std::vector<double>& sweep,
                   const std::string& out_dir, const run_options& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<scenario> scs = figure_preset(name, sweep);

    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + out_dir);

    std::vector<run_summary> rows(scs.size());
    std::vector<std::string> outputs;

    if (name == "fig1") {
        for (std::size_t i = 0; i < scs.size(); ++i) {
            const auto s0 = std::chrono::steady_clock::now();
            run_summary& r = rows[i];
            r.label = scs[i].label;
            r.kind = scs[i].bath.kind;
            r.k_max = scs[i].grid.k_max;
            r.epsilon = scs[i].system.epsilon;
            r.lambda_kappa = scs[i].bath.lambda_kappa;
            r.big_omega0 = scs[i].bath.big_omega0;
            r.csv_name = scs[i].label + ".csv";
            r.decay.tau1_note = "response series";
            r.decay.tau2_note = "response series";
            write_response_series(dir / r.csv_name, scs[i], 0.3);
            r.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count();
            outputs.push_back(r.csv_name);
        }
    } else {
        const std::string cache_dir = cache_dir_for(out_dir);
        std::vector<std::exception_ptr> errors(scs.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < scs.size();) {
                try {
                    rows[i] = run_core(scs[i], dir, cache_dir, opt);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        const int pool = std::clamp<int>(opt.jobs, 1, static_cast<int>(scs.size()));
        std::vector<std::thread> threads;
        for (int t = 1; t < pool; ++t) threads.emplace_back(worker);
        worker();
        for (std::thread& t : threads) t.join();
        for (const std::exception_ptr& e : errors)
            if (e) std::rethrow_exception(e);
        for (const run_summary& r : rows) outputs.push_back(r.csv_name);
    }

    write_summary_csv(dir / "summary.csv", rows);
    outputs.push_back("summary.csv");
    {
        std::ofstream os(dir / "plot.py");
        if (!os) throw io_error("cannot write plot.py");
        os << PLOT_SCRIPT;
    }
    outputs.push_back("plot.py");

    json manifest{{"command", "preset"}, {"preset", name}};
    json scenarios = json::array();
    for (std::size_t i = 0; i < scs.size(); ++i) scenarios.push_back(summary_to_json(rows[i], scs[i]));
    manifest["scenarios"] = std::move(scenarios);
    manifest["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, std::move(manifest), outputs);
}

void response_csv(std::ostream& os, const bath_spec& spec, double t_max,
                  const std::string& label) {
    if (!label.empty()) os << "# label = " << label << "\n";
    bath_header(os, spec);
    os << "# t_max = " << fmt(t_max) << "\n";
    os << "t,re_alpha,im_alpha,abs_alpha,quad_error\n";
    const response_samples samples =
        sample_response(spec, spec.beta(), t_max, 1.0 / (20.0 * spec.omega_c));
    for (std::size_t i = 0; i < samples.times.size(); ++i) {
        os << fmt(samples.times[i]) << ',' << fmt(samples.values[i].real()) << ','
           << fmt(samples.values[i].imag()) << ',' << fmt(std::abs(samples.values[i])) << ','
           << fmt(samples.quad_error[i]) << '\n';
    }
}

void spectrum_csv(std::ostream& os, const bath_spec& spec, const std::string& label) {
    if (!label.empty()) os << "# label = " << label << "\n";
    bath_header(os, spec);
    os << "omega,j_value\n";
    const int points = 513;
    const double top = 1.05 * spec.omega_c;
    for (int i = 0; i < points; ++i) {
        const double w = top * i / (points - 1);
        os << fmt(w) << ',' << fmt(j_value(w, spec)) << '\n';
    }
}

}  // namespace qsd
