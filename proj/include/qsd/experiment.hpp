#pragma once

// Batch plumbing: runs scenarios into an output directory as CSV series with
// a run manifest, and expands the figure presets into scenario batches.

#include <iosfwd>
#include <string>
#include <vector>

#include "qsd/kernels.hpp"
#include "qsd/model_config.hpp"
#include "qsd/observables.hpp"

namespace qsd {

struct run_options {
    int engine_threads = 1;       // tensor-update threads within one scenario
    int jobs = 1;                 // concurrent scenarios in a preset batch
    bool force_raw = false;       // --no-normalize: keep the raw tensor readout
    kernels::variant simd = kernels::variant::auto_pick;
};

// QSD_CACHE_DIR when set, otherwise <out_dir>/.qsd_cache.
std::string cache_dir_for(const std::string& out_dir);

struct run_summary {
    std::string label;
    bath_kind kind = bath_kind::ohmic;
    int k_max = 0;
    double epsilon = 0.0;
    double lambda_kappa = 0.0;  // effective-bath rows only
    double big_omega0 = 0.0;
    decay_report decay;
    double max_trace_drift = 0.0;
    std::string csv_name;
    std::string eta_key;
    double seconds = 0.0;
};

// One scenario end to end: trajectory CSV, summary.csv, manifest.json.
run_summary run_scenario_to_dir(const scenario& sc, const std::string& out_dir,
                                const run_options& opt);

// A whole figure preset: per-scenario CSVs, summary.csv, plot.py, manifest.json.
// fig1 emits response series instead of trajectories. sweep overrides the swept
// parameter values of fig4/fig5.
void preset_to_dir(const std::string& name, const std::vector<double>& sweep,
                   const std::string& out_dir, const run_options& opt);

// Streamed CSV bodies for the response and spectrum subcommands.
void response_csv(std::ostream& os, const bath_spec& spec, double t_max,
                  const std::string& label);
void spectrum_csv(std::ostream& os, const bath_spec& spec, const std::string& label);

}  // namespace qsd
