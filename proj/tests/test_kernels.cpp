#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <random>
#include <vector>

#include "qsd/errors.hpp"
#include "qsd/kernels.hpp"

using namespace qsd::kernels;

namespace {

// Straight-line restatement of the committed evaluation order, kept apart
// from the library so a kernel regression cannot hide in shared code.
void ref_fold4(double* out, const double* in, const double* tab, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* g = in + 8 * i;
        double pr[4], pi[4];
        for (int j = 0; j < 4; ++j) {
            const double ar = tab[2 * j], ai = tab[2 * j + 1];
            const double br = g[2 * j], bi = g[2 * j + 1];
            pr[j] = ar * br - ai * bi;
            pi[j] = ar * bi + ai * br;
        }
        out[2 * i] = (pr[0] + pr[2]) + (pr[1] + pr[3]);
        out[2 * i + 1] = (pi[0] + pi[2]) + (pi[1] + pi[3]);
    }
}

void ref_had_scale(double* out, const double* w, const double* x, double s_re, double s_im,
                   std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double tr = w[2 * i] * x[2 * i] - w[2 * i + 1] * x[2 * i + 1];
        const double ti = w[2 * i] * x[2 * i + 1] + w[2 * i + 1] * x[2 * i];
        out[2 * i] = tr * s_re - ti * s_im;
        out[2 * i + 1] = tr * s_im + ti * s_re;
    }
}

std::vector<double> random_doubles(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

const std::size_t SIZES[] = {0, 1, 2, 3, 5, 8, 17, 64, 1000, 4099};

}  // namespace

TEST_CASE("scalar fold4 reproduces the committed evaluation order bit for bit") {
    std::mt19937_64 rng(11);
    for (std::size_t n : SIZES) {
        const auto in = random_doubles(rng, 8 * n);
        const auto tab = random_doubles(rng, 8);
        std::vector<double> got(2 * n), want(2 * n);
        scalar_ops.fold4(got.data(), in.data(), tab.data(), n);
        ref_fold4(want.data(), in.data(), tab.data(), n);
        CHECK(bitwise_equal(got, want));
    }
}

TEST_CASE("scalar had_scale reproduces the committed evaluation order bit for bit") {
    std::mt19937_64 rng(12);
    for (std::size_t n : SIZES) {
        const auto w = random_doubles(rng, 2 * n);
        const auto x = random_doubles(rng, 2 * n);
        std::vector<double> got(2 * n), want(2 * n);
        scalar_ops.had_scale(got.data(), w.data(), x.data(), 0.37, -0.92, n);
        ref_had_scale(want.data(), w.data(), x.data(), 0.37, -0.92, n);
        CHECK(bitwise_equal(got, want));
    }
}

TEST_CASE("had_scale tolerates out aliasing x") {
    std::mt19937_64 rng(13);
    const std::size_t n = 33;
    const auto w = random_doubles(rng, 2 * n);
    auto x = random_doubles(rng, 2 * n);
    std::vector<double> want(2 * n);
    ref_had_scale(want.data(), w.data(), x.data(), 1.1, 0.2, n);
    scalar_ops.had_scale(x.data(), w.data(), x.data(), 1.1, 0.2, n);
    CHECK(bitwise_equal(x, want));
}

#ifdef QSD_HAVE_AVX2_TU
TEST_CASE("vector kernels match the scalar ones bit for bit") {
    if (!avx2_available()) {
        MESSAGE("CPU lacks AVX2, skipping the vector comparison");
        return;
    }
    std::mt19937_64 rng(14);
    for (std::size_t n : SIZES) {
        const auto in = random_doubles(rng, 8 * n);
        const auto tab = random_doubles(rng, 8);
        std::vector<double> s(2 * n), v(2 * n);
        scalar_ops.fold4(s.data(), in.data(), tab.data(), n);
        avx2_ops.fold4(v.data(), in.data(), tab.data(), n);
        CHECK(bitwise_equal(s, v));

        const auto w = random_doubles(rng, 2 * n);
        const auto x = random_doubles(rng, 2 * n);
        scalar_ops.had_scale(s.data(), w.data(), x.data(), -0.63, 0.41, n);
        avx2_ops.had_scale(v.data(), w.data(), x.data(), -0.63, 0.41, n);
        CHECK(bitwise_equal(s, v));

        // odd n exercises the vector variant's scalar tail
        auto xa = x;
        avx2_ops.had_scale(xa.data(), w.data(), xa.data(), -0.63, 0.41, n);
        CHECK(bitwise_equal(xa, v));
    }
}
#endif

TEST_CASE("variant parsing and selection") {
    CHECK(parse_variant("auto") == variant::auto_pick);
    CHECK(parse_variant("scalar") == variant::scalar);
    CHECK(parse_variant("avx2") == variant::avx2);

    bool threw = false;
    try {
        parse_variant("neon");
    } catch (const qsd::config_error& e) {
        threw = true;
        CHECK(e.kind() == qsd::config_errc::bad_value);
    }
    CHECK(threw);

    CHECK(std::string(select(variant::scalar).name) == "scalar");
    const std::string picked = select(variant::auto_pick).name;
    if (avx2_available())
        CHECK(picked == "avx2");
    else
        CHECK(picked == "scalar");

    if (!avx2_available()) {
        CHECK_THROWS_AS(select(variant::avx2), qsd::config_error);
    }
}

TEST_CASE("kernel choice follows the environment variable") {
    ::setenv("QSD_KERNEL", "scalar", 1);
    CHECK(env_variant() == variant::scalar);
    ::unsetenv("QSD_KERNEL");
    CHECK(env_variant() == variant::auto_pick);
}
