#pragma once

// Discretized influence-functional coefficients. Each eta entry couples two
// path slots; the table distinguishes interior slots (full width dt) from the
// half-width slot that opens the path at t = 0.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "qsd/model_config.hpp"

namespace qsd {

struct eta_table {
    double dt = 0.0;
    int k_max = 0;
    // interior[m] couples interior slots m apart; interior[0] is the same-slot term.
    std::vector<std::complex<double>> interior;
    // left_edge[m] couples the opening half slot to the interior slot m ahead
    // of it; left_edge[0] is unused and stays zero.
    std::vector<std::complex<double>> left_edge;
    // Same-slot term of the opening half slot.
    std::complex<double> self_edge;
};

// Frequency-domain construction: each entry is a single windowed integral of
// J(omega) against its slot-pair kernel.
eta_table build_eta(const bath_spec& spec, double beta, double dt, int k_max, double tol = 1e-12);

// Time-domain construction from an arbitrary response function: each entry is
// the response integrated against its slot-overlap weight. Used to cross-check
// the frequency route and to feed synthetic response shapes in tests.
eta_table build_eta_from_response(const std::function<std::complex<double>(double)>& alpha,
                                  double dt, int k_max, double tol = 1e-10);

// Influence weight of one slot pair: exp{-(s+_l - s-_l)(eta s+_e - conj(eta) s-_e)}
// with pair states encoded 0..3 as (s+, s-) in {+1, -1}^2, minus sign on bit set.
std::complex<double> pair_weight(std::complex<double> eta, int late_pair, int early_pair);

// Forward spin of a pair index (+1 or -1).
inline double spin_plus(int pair) { return (pair & 2) ? -1.0 : 1.0; }
// Backward spin of a pair index.
inline double spin_minus(int pair) { return (pair & 1) ? -1.0 : 1.0; }

struct eta_cache_result {
    eta_table table;
    std::string key;  // content hash of the inputs, hex
    bool from_cache = false;
};

// Disk-backed build_eta. The key hashes the exact double bits of every input,
// so a hit reproduces the table bit for bit; a corrupt or truncated file is
// rebuilt and rewritten in place.
eta_cache_result load_or_build_eta(const std::string& cache_dir, const bath_spec& spec,
                                   double beta, double dt, int k_max, double tol = 1e-12);

}  // namespace qsd
