#include "qsd/influence.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <utility>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <thread>

#include "qsd/bath_response.hpp"
#include "qsd/errors.hpp"
#include "qsd/quadrature.hpp"
#include "qsd/spectral.hpp"

namespace qsd {

namespace {

using cxd = std::complex<double>;
using std::numbers::pi;

std::pair<double, double> eta_bounds(const bath_spec& spec) {
    if (spec.window) return {spec.omega_0, spec.omega_c};
    const double hi = spec.kind == bath_kind::ohmic
                          ? 45.0 * spec.omega_c
                          : 45.0 * std::max(spec.omega_c, spec.big_omega0);
    return {0.0, hi};
}

// One eta entry: (1/pi) Int J [coth cos(w t_sep) - i sin(w t_sep)] kernel(w) dw.
cxd eta_entry(const bath_spec& spec, double beta, double t_sep, double t_osc,
              const std::function<double(double)>& kernel, double tol) {
    const auto [lo, hi] = eta_bounds(spec);
    auto integrand = [&](double w) -> cxd {
        const double j = j_value(w, spec);
        if (j == 0.0) return 0.0;
        const double k = kernel(w);
        const double c = coth_series_safe(0.5 * beta * w);
        return j * k * cxd(c * std::cos(w * t_sep), -std::sin(w * t_sep));
    };
    quad_options opt;
    opt.abs_tol = tol * pi;
    opt.max_panel_width = pi / (4.0 * t_osc);
    return integrate(integrand, lo, hi, opt).value / pi;
}

// Same-slot entry for a slot of width h: (1/pi) Int J [coth (1 - cos wh) - i (wh - sin wh)] / w^2 dw.
cxd eta_self(const bath_spec& spec, double beta, double h, double tol) {
    const auto [lo, hi] = eta_bounds(spec);
    auto integrand = [&](double w) -> cxd {
        const double j = j_value(w, spec);
        if (j == 0.0) return 0.0;
        const double x = w * h;
        const double s = std::sin(0.5 * x);
        const double c = coth_series_safe(0.5 * beta * w);
        return j * cxd(c * 2.0 * s * s, -(x - std::sin(x))) / (w * w);
    };
    quad_options opt;
    opt.abs_tol = tol * pi;
    opt.max_panel_width = pi / (4.0 * h);
    return integrate(integrand, lo, hi, opt).value / pi;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 14695981039346656037ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t mix_double(std::uint64_t h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    return fnv1a(&bits, sizeof bits, h);
}

std::uint64_t mix_u64(std::uint64_t h, std::uint64_t v) { return fnv1a(&v, sizeof v, h); }

constexpr std::uint32_t CACHE_MAGIC = 0x41544551u;  // "QETA"
constexpr std::uint32_t CACHE_VERSION = 1;

std::vector<unsigned char> serialize_table(const eta_table& t) {
    std::vector<unsigned char> buf;
    auto put = [&buf](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        buf.insert(buf.end(), b, b + n);
    };
    const std::uint32_t k = static_cast<std::uint32_t>(t.k_max);
    put(&k, sizeof k);
    put(&t.dt, sizeof t.dt);
    for (const cxd& v : t.interior) put(&v, sizeof v);
    for (const cxd& v : t.left_edge) put(&v, sizeof v);
    put(&t.self_edge, sizeof t.self_edge);
    return buf;
}

}  // namespace

eta_table build_eta(const bath_spec& spec, double beta, double dt, int k_max, double tol) {
    eta_table t;
    t.dt = dt;
    t.k_max = k_max;
    t.interior.assign(k_max + 1, 0.0);
    t.left_edge.assign(k_max + 1, 0.0);

    t.interior[0] = eta_self(spec, beta, dt, tol);
    t.self_edge = eta_self(spec, beta, 0.5 * dt, tol);
    for (int m = 1; m <= k_max; ++m) {
        auto full_kernel = [dt](double w) {
            const double s = 2.0 * std::sin(0.5 * w * dt) / w;
            return s * s;
        };
        auto edge_kernel = [dt](double w) {
            return 4.0 * std::sin(0.5 * w * dt) * std::sin(0.25 * w * dt) / (w * w);
        };
        t.interior[m] = eta_entry(spec, beta, m * dt, (m + 1) * dt, full_kernel, tol);
        t.left_edge[m] = eta_entry(spec, beta, (m - 0.25) * dt, (m + 1) * dt, edge_kernel, tol);
    }
    return t;
}

eta_table build_eta_from_response(const std::function<cxd(double)>& alpha, double dt, int k_max,
                                  double tol) {
    eta_table t;
    t.dt = dt;
    t.k_max = k_max;
    t.interior.assign(k_max + 1, 0.0);
    t.left_edge.assign(k_max + 1, 0.0);

    quad_options opt;
    opt.abs_tol = tol;

    auto piece = [&](double a, double b, const std::function<double(double)>& w) {
        return integrate([&](double u) { return w(u) * alpha(u); }, a, b, opt).value;
    };

    // Self terms carry the weight (h - u) over [0, h].
    t.interior[0] = piece(0.0, dt, [dt](double u) { return dt - u; });
    t.self_edge = piece(0.0, 0.5 * dt, [dt](double u) { return 0.5 * dt - u; });

    for (int m = 1; m <= k_max; ++m) {
        // Full-width pair: triangle weight peaking at u = m dt.
        const double c = m * dt;
        t.interior[m] = piece(c - dt, c, [&](double u) { return dt - (c - u); }) +
                        piece(c, c + dt, [&](double u) { return dt - (u - c); });
        // Opening half slot against a full slot: trapezoid with plateau dt/2.
        t.left_edge[m] = piece(c - dt, c - 0.5 * dt, [&](double u) { return u - (c - dt); }) +
                         piece(c - 0.5 * dt, c, [&](double) { return 0.5 * dt; }) +
                         piece(c, c + 0.5 * dt, [&](double u) { return (c + 0.5 * dt) - u; });
    }
    return t;
}

cxd pair_weight(cxd eta, int late_pair, int early_pair) {
    const double dl = spin_plus(late_pair) - spin_minus(late_pair);
    const cxd mixed = eta * spin_plus(early_pair) - std::conj(eta) * spin_minus(early_pair);
    return std::exp(-dl * mixed);
}

eta_cache_result load_or_build_eta(const std::string& cache_dir, const bath_spec& spec,
                                   double beta, double dt, int k_max, double tol) {
    std::uint64_t h = 14695981039346656037ULL;
    h = mix_u64(h, spec.kind == bath_kind::ohmic ? 0 : 1);
    h = mix_u64(h, spec.window ? 1 : 0);
    h = mix_double(h, spec.xi);
    h = mix_double(h, spec.omega_c);
    h = mix_double(h, spec.omega_0);
    h = mix_double(h, spec.lambda_kappa);
    h = mix_double(h, spec.big_omega0);
    h = mix_double(h, spec.gamma_damp);
    h = mix_double(h, beta);
    h = mix_double(h, dt);
    h = mix_u64(h, static_cast<std::uint64_t>(k_max));
    h = mix_double(h, tol);

    char keybuf[17];
    std::snprintf(keybuf, sizeof keybuf, "%016llx", static_cast<unsigned long long>(h));
    eta_cache_result out;
    out.key = keybuf;

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cache_dir, ec);
    const fs::path file = fs::path(cache_dir) / ("eta_" + out.key + ".bin");

    const std::size_t payload_size =
        sizeof(std::uint32_t) + sizeof(double) + (2 * (k_max + 1) + 1) * sizeof(cxd);

    if (fs::exists(file, ec)) {
        std::ifstream in(file, std::ios::binary);
        std::uint32_t magic = 0, version = 0;
        std::uint64_t stored_hash = 0;
        std::vector<unsigned char> payload(payload_size);
        in.read(reinterpret_cast<char*>(&magic), sizeof magic);
        in.read(reinterpret_cast<char*>(&version), sizeof version);
        in.read(reinterpret_cast<char*>(payload.data()), payload.size());
        in.read(reinterpret_cast<char*>(&stored_hash), sizeof stored_hash);
        if (in && magic == CACHE_MAGIC && version == CACHE_VERSION &&
            stored_hash == fnv1a(payload.data(), payload.size())) {
            eta_table t;
            const unsigned char* p = payload.data();
            std::uint32_t k;
            std::memcpy(&k, p, sizeof k);
            p += sizeof k;
            if (static_cast<int>(k) == k_max) {
                t.k_max = k_max;
                std::memcpy(&t.dt, p, sizeof t.dt);
                p += sizeof t.dt;
                t.interior.resize(k_max + 1);
                t.left_edge.resize(k_max + 1);
                std::memcpy(t.interior.data(), p, (k_max + 1) * sizeof(cxd));
                p += (k_max + 1) * sizeof(cxd);
                std::memcpy(t.left_edge.data(), p, (k_max + 1) * sizeof(cxd));
                p += (k_max + 1) * sizeof(cxd);
                std::memcpy(&t.self_edge, p, sizeof t.self_edge);
                out.table = std::move(t);
                out.from_cache = true;
                return out;
            }
        }
    }

    out.table = build_eta(spec, beta, dt, k_max, tol);
    const std::vector<unsigned char> payload = serialize_table(out.table);
    const std::uint64_t payload_hash = fnv1a(payload.data(), payload.size());
    // Concurrent runs can share a key (the biasing field is not part of it), so
    // publish through a rename to keep readers away from half-written files.
    const fs::path tmp = file.string() + "." +
                         std::to_string(static_cast<unsigned long>(
                             std::hash<std::thread::id>{}(std::this_thread::get_id()))) +
                         ".tmp";
    {
        std::ofstream outf(tmp, std::ios::binary | std::ios::trunc);
        if (!outf) return out;
        outf.write(reinterpret_cast<const char*>(&CACHE_MAGIC), sizeof CACHE_MAGIC);
        outf.write(reinterpret_cast<const char*>(&CACHE_VERSION), sizeof CACHE_VERSION);
        outf.write(reinterpret_cast<const char*>(payload.data()), payload.size());
        outf.write(reinterpret_cast<const char*>(&payload_hash), sizeof payload_hash);
    }
    fs::rename(tmp, file, ec);
    if (ec) fs::remove(tmp, ec);
    return out;
}

}  // namespace qsd
