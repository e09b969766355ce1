#include "qsd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qsd/errors.hpp"

namespace qsd {

namespace {

using cxd = std::complex<double>;

// 15-point Gauss-Legendre nodes and weights on [-1, 1], symmetric about zero.
constexpr int GL_N = 15;
constexpr double GL_X[GL_N] = {
    -0.98799251802048542848956571858661, -0.93727339240070590430775894771021,
    -0.84820658341042721620064832077422, -0.72441773136017004741618605461394,
    -0.57097217260853884753722673725391, -0.39415134707756336989720737098573,
    -0.20119409399743452230062830339460, 0.0,
    0.20119409399743452230062830339460,  0.39415134707756336989720737098573,
    0.57097217260853884753722673725391,  0.72441773136017004741618605461394,
    0.84820658341042721620064832077422,  0.93727339240070590430775894771021,
    0.98799251802048542848956571858661};
constexpr double GL_W[GL_N] = {
    0.03075324199611726835462839357720, 0.07036604748810812470926741645066,
    0.10715922046717193501186954668587, 0.13957067792615431444780479451103,
    0.16626920581699393355320086048121, 0.18616100001556221102680056186642,
    0.19843148532711157645611832644384, 0.20257824192556127288062019996752,
    0.19843148532711157645611832644384, 0.18616100001556221102680056186642,
    0.16626920581699393355320086048121, 0.13957067792615431444780479451103,
    0.10715922046717193501186954668587, 0.07036604748810812470926741645066,
    0.03075324199611726835462839357720};

cxd gl15(const std::function<cxd(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    cxd acc = 0.0;
    for (int i = 0; i < GL_N; ++i) acc += GL_W[i] * f(mid + half * GL_X[i]);
    return half * acc;
}

struct panel {
    double a, b;
    cxd coarse;  // GL15 over [a, b], reused when the panel splits
};

}  // namespace

quad_result integrate(const std::function<cxd(double)>& f, double a, double b,
                      const quad_options& opt) {
    quad_result out;
    if (!(b > a)) return out;

    const double total = b - a;
    double cap = total / 8.0;
    if (opt.max_panel_width > 0) cap = std::min(cap, opt.max_panel_width);
    const int n0 = std::max(1, static_cast<int>(std::ceil(total / cap)));

    std::vector<panel> stack;
    stack.reserve(64);
    const double w0 = total / n0;
    for (int i = n0; i-- > 0;) {
        const double pa = a + i * w0;
        const double pb = (i + 1 == n0) ? b : a + (i + 1) * w0;
        stack.push_back({pa, pb, gl15(f, pa, pb)});
    }

    int used = n0;
    while (!stack.empty()) {
        const panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        const cxd left = gl15(f, p.a, mid);
        const cxd right = gl15(f, mid, p.b);
        const cxd fine = left + right;
        const double err = std::abs(fine - p.coarse);
        const double width = p.b - p.a;
        if (err <= opt.abs_tol * width / total || width < 1e-14 * total) {
            out.value += fine;
            out.error += err;
            continue;
        }
        used += 2;
        if (used > opt.max_panels)
            throw numeric_error(numeric_errc::tolerance_not_met,
                                "integration panel budget exhausted before reaching tolerance");
        stack.push_back({p.a, mid, left});
        stack.push_back({mid, p.b, right});
    }
    return out;
}

real_quad_result integrate_real(const std::function<double(double)>& f, double a, double b,
                                const quad_options& opt) {
    const quad_result r = integrate([&f](double x) { return cxd(f(x), 0.0); }, a, b, opt);
    return {r.value.real(), r.error};
}

}  // namespace qsd
