#include "qsd/quapi_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

#include "qsd/errors.hpp"

namespace qsd {

namespace {

using cxd = std::complex<double>;

// Canonical complex product shared by every code path that is not inside a
// dispatched kernel, so threading and variant choice cannot reorder it.
inline void cmul_acc(double ar, double ai, double br, double bi, double& re, double& im) {
    re = ar * br - ai * bi;
    im = ar * bi + ai * br;
}

// One influence table as interleaved pair-weight rows: row(new) = 8 doubles,
// entry old at offsets 2*old.
using pw_table = std::array<double, 32>;

pw_table make_table(cxd eta) {
    pw_table t;
    for (int nw = 0; nw < 4; ++nw)
        for (int old = 0; old < 4; ++old) {
            const cxd w = pair_weight(eta, nw, old);
            t[nw * 8 + 2 * old] = w.real();
            t[nw * 8 + 2 * old + 1] = w.imag();
        }
    return t;
}

void fold_in_propagator(pw_table& t, const std::array<cxd, 16>& g) {
    for (int nw = 0; nw < 4; ++nw)
        for (int old = 0; old < 4; ++old) {
            double re, im;
            cmul_acc(g[4 * nw + old].real(), g[4 * nw + old].imag(), t[nw * 8 + 2 * old],
                     t[nw * 8 + 2 * old + 1], re, im);
            t[nw * 8 + 2 * old] = re;
            t[nw * 8 + 2 * old + 1] = im;
        }
}

// w <- w (x) row, the 4-entry row becoming the fastest axis.
void kron_append(std::vector<double>& w, const double* row) {
    const std::size_t n = w.size() / 2;
    std::vector<double> out(8 * n);
    for (std::size_t j = 0; j < n; ++j)
        for (int o = 0; o < 4; ++o)
            cmul_acc(w[2 * j], w[2 * j + 1], row[2 * o], row[2 * o + 1], out[2 * (4 * j + o)],
                     out[2 * (4 * j + o) + 1]);
    w = std::move(out);
}

struct engine_core {
    int k = 1;
    long n_entries = 4;  // 4^k once fully grown
    const kernels::ops* ops = nullptr;
    int threads = 1;

    std::array<cxd, 16> g;
    std::vector<pw_table> t_int, t_left;  // index m, [0] unused
    pw_table gt_int1, gt_left1;           // m = 1 tables with the propagator folded in
    pw_table gc_left, gc_int;             // k = 1 contraction tables, propagator folded in
    std::array<cxd, 4> s_self, s_edge;

    std::vector<double> a, b;
    std::array<std::vector<double>, 4> w_steady;
    std::array<std::vector<double>, 4> w_scratch;
    long order = 1;

    engine_core(const system_params& sys, double dt, const eta_table& eta,
                const engine_options& opts) {
        k = eta.k_max;
        if (k < 1) throw config_error(config_errc::out_of_range, "k_max must be at least 1");
        if (2 * k >= 63 || (std::size_t{1} << (2 * k)) > opts.max_entries)
            throw numeric_error(numeric_errc::memory_budget_exceeded,
                                "4^" + std::to_string(k) + " tensor entries exceed the budget of " +
                                    std::to_string(opts.max_entries));
        n_entries = long{1} << (2 * k);
        ops = &kernels::select(opts.simd);
        threads = std::clamp(opts.threads, 1, 4);

        g = pair_propagator(free_propagator(sys, dt));

        t_int.resize(k + 1);
        t_left.resize(k + 1);
        for (int m = 1; m <= k; ++m) {
            t_int[m] = make_table(eta.interior[m]);
            t_left[m] = make_table(eta.left_edge[m]);
        }
        gt_int1 = t_int[1];
        fold_in_propagator(gt_int1, g);
        gt_left1 = t_left[1];
        fold_in_propagator(gt_left1, g);
        if (k == 1) {
            gc_left = gt_left1;
            gc_int = gt_int1;
        }
        for (int u = 0; u < 4; ++u) {
            s_self[u] = pair_weight(eta.interior[0], u, u);
            s_edge[u] = pair_weight(eta.self_edge, u, u);
        }

        a.assign(2 * n_entries, 0.0);
        b.assign(2 * n_entries, 0.0);
        if (k > 1) {
            for (int u = 0; u < 4; ++u) {
                std::vector<double>& w = w_steady[u];
                w = {gt_int1[u * 8 + 0], gt_int1[u * 8 + 1], gt_int1[u * 8 + 2], gt_int1[u * 8 + 3],
                     gt_int1[u * 8 + 4], gt_int1[u * 8 + 5], gt_int1[u * 8 + 6], gt_int1[u * 8 + 7]};
                for (int m = 2; m <= k - 1; ++m) kron_append(w, &t_int[m][u * 8]);
                w_scratch[u].reserve(w.size());
            }
        }
    }

    void init(const Mat2& rho0) {
        order = 1;
        std::fill(a.begin(), a.end(), 0.0);
        for (int u = 0; u < 4; ++u) {
            const cxd v = s_edge[u] * rho0[u >> 1][u & 1];
            a[2 * u] = v.real();
            a[2 * u + 1] = v.imag();
        }
    }

    void for_each_new(const std::function<void(int)>& work) {
        if (threads == 1) {
            for (int u = 0; u < 4; ++u) work(u);
            return;
        }
        std::vector<std::thread> pool;
        for (int t = 1; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (int u = t; u < 4; u += threads) work(u);
            });
        for (int u = 0; u < 4; u += threads) work(u);
        for (std::thread& t : pool) t.join();
    }

    void step(long n) {
        if (n <= k - 1) {
            const long len = long{1} << (2 * order);  // current tensor size = 4^n
            for_each_new([&](int u) {
                std::vector<double>& w = w_scratch[u];
                const pw_table& first = (n == 1) ? gt_left1 : gt_int1;
                w.assign(first.begin() + u * 8, first.begin() + u * 8 + 8);
                for (long m = 2; m <= n; ++m)
                    kron_append(w, &((m == n ? t_left : t_int)[m][u * 8]));
                ops->had_scale(b.data() + 2 * u * len, w.data(), a.data(), s_self[u].real(),
                               s_self[u].imag(), len);
            });
            ++order;
        } else {
            const long m4 = n_entries / 4;
            auto ctab_of = [&](int u) {
                return k == 1 ? &(n == k ? gc_left : gc_int)[u * 8]
                              : &(n == k ? t_left : t_int)[k][u * 8];
            };
            if (threads == 1 && k > 1) {
                // Every new index reads the whole tensor, so walk it in blocks
                // that stay cached while all four consume them.
                constexpr long block = 2048;
                for (long j0 = 0; j0 < m4; j0 += block) {
                    const long len = std::min(block, m4 - j0);
                    for (int u = 0; u < 4; ++u) {
                        double* slice = b.data() + 2 * (u * m4 + j0);
                        ops->fold4(slice, a.data() + 8 * j0, ctab_of(u), len);
                        ops->had_scale(slice, w_steady[u].data() + 2 * j0, slice,
                                       s_self[u].real(), s_self[u].imag(), len);
                    }
                }
            } else {
                for_each_new([&](int u) {
                    double* slice = b.data() + 2 * u * m4;
                    ops->fold4(slice, a.data(), ctab_of(u), m4);
                    if (k > 1) {
                        ops->had_scale(slice, w_steady[u].data(), slice, s_self[u].real(),
                                       s_self[u].imag(), m4);
                    } else {
                        double re, im;
                        cmul_acc(slice[0], slice[1], s_self[u].real(), s_self[u].imag(), re, im);
                        slice[0] = re;
                        slice[1] = im;
                    }
                });
            }
        }
        std::swap(a, b);
    }

    std::array<cxd, 4> readout(long n) const {
        const long block = long{1} << (2 * (order - 1));
        std::array<cxd, 4> raw;
        for (int u = 0; u < 4; ++u) {
            double re = 0.0, im = 0.0;
            const double* p = a.data() + 2 * u * block;
            for (long j = 0; j < block; ++j) {
                re += p[2 * j];
                im += p[2 * j + 1];
            }
            if (!std::isfinite(re) || !std::isfinite(im))
                throw numeric_error(numeric_errc::non_finite_tensor,
                                    "tensor readout is not finite at step " + std::to_string(n));
            raw[u] = {re, im};
        }
        return raw;
    }
};

}  // namespace

Mat2 free_propagator(const system_params& sys, double dt) {
    const double w = std::sqrt(sys.epsilon * sys.epsilon + sys.delta * sys.delta);
    const double theta = 0.5 * dt * w;
    const double c = std::cos(theta);
    const double s = w > 0.0 ? std::sin(theta) / w : 0.0;  // sin(theta) * n / w per component
    const cxd i(0.0, 1.0);
    Mat2 kp;
    kp[0][0] = c - i * s * sys.epsilon;
    kp[0][1] = -i * s * sys.delta;
    kp[1][0] = -i * s * sys.delta;
    kp[1][1] = c + i * s * sys.epsilon;
    return kp;
}

double unitarity_defect(const Mat2& k) {
    double worst = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            cxd v = std::conj(k[0][r]) * k[0][c] + std::conj(k[1][r]) * k[1][c];
            if (r == c) v -= 1.0;
            worst = std::max(worst, std::abs(v));
        }
    return worst;
}

Mat2 thermal_reference(const system_params& sys, double beta) {
    const double w = std::sqrt(sys.epsilon * sys.epsilon + sys.delta * sys.delta);
    Mat2 rho;
    if (w == 0.0) {
        rho[0][0] = 0.5;
        rho[1][1] = 0.5;
        return rho;
    }
    const double ch = std::cosh(0.5 * beta * w);
    const double sh = std::sinh(0.5 * beta * w);
    const double nx = sys.delta / w, nz = sys.epsilon / w;
    // exp(-beta H) = ch I - sh (nx sx + nz sz), trace 2 ch
    rho[0][0] = (ch - sh * nz) / (2.0 * ch);
    rho[0][1] = -sh * nx / (2.0 * ch);
    rho[1][0] = -sh * nx / (2.0 * ch);
    rho[1][1] = (ch + sh * nz) / (2.0 * ch);
    return rho;
}

std::array<cxd, 16> pair_propagator(const Mat2& k) {
    std::array<cxd, 16> g;
    for (int an = 0; an < 2; ++an)
        for (int bn = 0; bn < 2; ++bn)
            for (int ao = 0; ao < 2; ++ao)
                for (int bo = 0; bo < 2; ++bo)
                    g[4 * (2 * an + bn) + (2 * ao + bo)] = k[an][ao] * std::conj(k[bn][bo]);
    return g;
}

trajectory itm_propagate(const scenario& sc, const eta_table& eta, const engine_options& opts) {
    if (eta.k_max != sc.grid.k_max || eta.dt != sc.grid.dt)
        throw config_error(config_errc::bad_value,
                           "influence table was built for a different time grid");

    engine_core core(sc.system, sc.grid.dt, eta, opts);
    core.init(sc.initial.rho);

    const long n_steps = sc.grid.n_steps;
    trajectory out;
    out.times.reserve(n_steps + 1);
    out.rho.reserve(n_steps + 1);
    out.raw_trace.reserve(n_steps + 1);

    out.times.push_back(0.0);
    out.rho.push_back(sc.initial.rho);
    out.raw_trace.push_back(sc.initial.rho[0][0] + sc.initial.rho[1][1]);

    for (long n = 1; n <= n_steps; ++n) {
        core.step(n);
        const std::array<cxd, 4> raw = core.readout(n);
        const cxd tr = raw[0] + raw[3];
        Mat2 rho = {{{raw[0], raw[1]}, {raw[2], raw[3]}}};
        if (opts.normalize)
            for (auto& row : rho)
                for (cxd& v : row) v /= tr;
        out.times.push_back(n * sc.grid.dt);
        out.rho.push_back(rho);
        out.raw_trace.push_back(tr);
    }
    return out;
}

trajectory_diagnostics diagnostics(const trajectory& traj) {
    trajectory_diagnostics d;
    d.min_eigenvalue = 1.0;
    for (std::size_t i = 0; i < traj.rho.size(); ++i) {
        const Mat2& r = traj.rho[i];
        const double herm =
            std::max({std::abs(r[0][1] - std::conj(r[1][0])), std::abs(r[0][0].imag()),
                      std::abs(r[1][1].imag())});
        d.max_hermiticity_defect = std::max(d.max_hermiticity_defect, herm);
        d.max_raw_trace_drift = std::max(d.max_raw_trace_drift, std::abs(traj.raw_trace[i] - 1.0));
        const double mean = 0.5 * (r[0][0].real() + r[1][1].real());
        const cxd off = 0.5 * (r[0][1] + std::conj(r[1][0]));
        const double rad = std::sqrt(0.25 * std::pow(r[0][0].real() - r[1][1].real(), 2) +
                                     std::norm(off));
        d.min_eigenvalue = std::min(d.min_eigenvalue, mean - rad);
    }
    return d;
}

std::vector<double> steady_step_seconds(int k_max, int reps, const engine_options& opts) {
    eta_table eta;
    eta.dt = 0.01;
    eta.k_max = k_max;
    eta.interior.assign(k_max + 1, 0.0);
    eta.left_edge.assign(k_max + 1, 0.0);
    eta.interior[0] = cxd(2e-3, -1e-3);
    eta.self_edge = cxd(1e-3, -5e-4);
    double decay = 1.0;
    for (int m = 1; m <= k_max; ++m) {
        decay *= 0.6;
        eta.interior[m] = cxd(1e-3, -5e-4) * decay;
        eta.left_edge[m] = cxd(5e-4, -2e-4) * decay;
    }

    system_params sys;
    sys.epsilon = 1.0;
    sys.delta = 1.0;
    const auto amps = standard_initial_states()[0];
    Mat2 rho0 = {{{amps[0] * std::conj(amps[0]), amps[0] * std::conj(amps[1])},
                  {amps[1] * std::conj(amps[0]), amps[1] * std::conj(amps[1])}}};

    engine_core core(sys, eta.dt, eta, opts);
    core.init(rho0);
    for (long n = 1; n <= k_max - 1; ++n) core.step(n);

    std::vector<double> out;
    out.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        core.step(k_max + r);
        const auto t1 = std::chrono::steady_clock::now();
        out.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    return out;
}

}  // namespace qsd
