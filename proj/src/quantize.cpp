#include "swkb/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swkb/actions.hpp"
#include "swkb/errors.hpp"
#include "swkb/numeric.hpp"

namespace swkb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double im_action(const PotentialSpec& spec, double E) {
    return std::imag(contour_action(spec, E).value);
}

// Solve Im A(E) = target by bisection plus a few secant polish steps.
struct SolveOut {
    double E;
    double residual;
    int iters;
};

SolveOut solve_target(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi,
                      double target) {
    int iters = 0;
    double a = lo, b = hi, fa = flo - target, fb = fhi - target;
    if (!(fa < 0 && fb > 0)) fail(Errc::NoBoundWindow, "target not bracketed");
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        const double fm = f(mid) - target;
        ++iters;
        if (fm < 0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
        if (b - a < 1e-13 * std::max(1.0, std::abs(mid))) break;
    }
    // Secant polish on the smooth residual.
    double x0 = a, x1 = b, f0 = fa, f1 = fb;
    for (int it = 0; it < 4; ++it) {
        if (f1 == f0) break;
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 > lo && x2 < hi)) break;
        const double f2 = f(x2) - target;
        ++iters;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (std::abs(f2) < 0.25 * kSolveTol) break;
    }
    if (std::abs(f1) > std::abs(f0)) {
        std::swap(x0, x1);
        std::swap(f0, f1);
    }
    return {x1, std::abs(f1), iters};
}

} // namespace

SpectrumResult wkb_spectrum(const PotentialSpec& spec, int m_max) {
    SpectrumResult out;
    out.method = Method::JWKB;
    out.label = family_name(spec.family);
    out.requested_m_max = m_max;

    const BoundWindow w = bound_window(spec);
    const double span0 = std::isfinite(w.hi) ? w.hi - w.lo : 1.0;
    double e_lo = w.lo + 1e-9 * std::max(1.0, std::abs(w.lo)) + 1e-11 * span0;
    while (!has_two_real_turning_points(spec, e_lo)) {
        e_lo = w.lo + 2.0 * (e_lo - w.lo);
        if (!(e_lo < (std::isfinite(w.hi) ? w.hi : w.lo + 1e12)))
            fail(Errc::NoBoundWindow, "no admissible energies");
    }
    double f_lo = im_action(spec, e_lo);

    double e_hi, f_hi;
    if (std::isfinite(w.hi)) {
        e_hi = w.hi - 1e-9 * std::max(1.0, std::abs(w.hi)) - 1e-11 * span0;
        f_hi = im_action(spec, e_hi);
    } else {
        e_hi = e_lo + std::max(1.0, std::abs(e_lo));
        while (true) {
            f_hi = im_action(spec, e_hi);
            if (f_hi > (2.0 * m_max + 1.0) * kPi) break;
            e_hi = e_lo + 2.0 * (e_hi - e_lo);
            if (e_hi - e_lo > 1e12) fail(Errc::NoBoundWindow, "action fails to reach target");
        }
    }

    for (int m = 0; m <= m_max; ++m) {
        const double target = (2.0 * m + 1.0) * kPi;
        if (target <= f_lo || target >= f_hi) {
            out.omitted_above_window = m_max - m + 1;
            break;
        }
        SolveOut s = solve_target([&](double E) { return im_action(spec, E); }, e_lo, e_hi, f_lo, f_hi,
                                  target);
        out.levels.push_back({m, s.E, s.residual, s.iters});
    }
    return out;
}

double wkb_index(const PotentialSpec& spec, double E) {
    return (im_action(spec, E) / kPi - 1.0) / 2.0;
}

double wkb_level_at_index(const PotentialSpec& spec, double nu) {
    const BoundWindow w = bound_window(spec);
    double e_lo = w.lo + 1e-9 * std::max(1.0, std::abs(w.lo));
    while (!has_two_real_turning_points(spec, e_lo)) e_lo = w.lo + 2.0 * (e_lo - w.lo);
    const double f_lo = im_action(spec, e_lo);
    const double target = (2.0 * nu + 1.0) * kPi;
    double e_hi, f_hi;
    if (std::isfinite(w.hi)) {
        e_hi = w.hi - 1e-9 * std::max(1.0, std::abs(w.hi));
        f_hi = im_action(spec, e_hi);
    } else {
        e_hi = e_lo + std::max(1.0, std::abs(e_lo));
        while ((f_hi = im_action(spec, e_hi)) <= target) {
            e_hi = e_lo + 2.0 * (e_hi - e_lo);
            if (e_hi - e_lo > 1e12) fail(Errc::NoBoundWindow, "action fails to reach target");
        }
    }
    if (target <= f_lo || target >= f_hi) fail(Errc::NoBoundWindow, "index outside the bound window");
    return solve_target([&](double E) { return im_action(spec, E); }, e_lo, e_hi, f_lo, f_hi, target).E;
}

namespace {

// 2*lambda*int sqrt(Et - phi^2) dx between the two real crossings of phi^2 = Et,
// located by bisection outward from the well minimum at x_min.
double swkb_action(const std::function<double(double)>& phi, double lo, double hi, double lambda,
                   double Et, double x_min) {
    auto p2 = [&](double x) {
        const double p = phi(x);
        return p * p;
    };
    const double f_min = p2(x_min) - Et;
    if (!(f_min < 0)) fail(Errc::NoBoundWindow, "E~ below the bottom of phi^2");
    if (!(p2(lo) - Et > 0) || !(p2(hi) - Et > 0))
        fail(Errc::NoBoundWindow, "phi^2 = E~ does not have exactly two real roots");
    const double xm = bisect([&](double t) { return p2(t) - Et; }, x_min, lo, f_min, 200);
    const double xpl = bisect([&](double t) { return p2(t) - Et; }, x_min, hi, f_min, 200);
    auto f = [&](double x) { return Cx(std::sqrt(std::max(Et - p2(x), 0.0)), 0.0); };
    const double mid = 0.5 * (xm + xpl);
    const double tl = std::sqrt(mid - xm), tr = std::sqrt(xpl - mid);
    QuadResult L = integrate_adaptive([&](double t) { return f(xm + t * t) * (2.0 * t); }, 0.0, tl, kQuadTol);
    QuadResult R = integrate_adaptive([&](double t) { return f(xpl - t * t) * (2.0 * t); }, tr, 0.0, kQuadTol);
    return 2.0 * lambda * (std::real(L.value) - std::real(R.value));
}

} // namespace

SpectrumResult swkb_spectrum_fn(const std::function<double(double)>& phi, double dom_lo, double dom_hi,
                                double lambda, double eps0, int m_max, const std::string& label) {
    SpectrumResult out;
    out.method = Method::SWKB;
    out.label = label;
    out.requested_m_max = m_max;

    double lo = std::isfinite(dom_lo) ? dom_lo + 1e-5 : -35.0;
    double hi = std::isfinite(dom_hi) ? dom_hi - 1e-5 : 35.0;

    // Window: (min phi^2, smaller endpoint limit of phi^2).
    auto p2 = [&](double x) {
        const double p = phi(x);
        return p * p;
    };
    const int n = 6000;
    double pmin = kInf, bx = lo;
    for (int i = 1; i < n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double v = p2(x);
        if (v < pmin) {
            pmin = v;
            bx = x;
        }
    }
    const double h = (hi - lo) / n;
    bx = golden_min(p2, std::max(lo, bx - h), std::min(hi, bx + h));
    pmin = std::min(pmin, p2(bx));
    double edge = kInf;
    for (double xe : {lo, hi}) {
        const double v = p2(xe);
        if (std::isfinite(v) && v < 1e8) edge = std::min(edge, v);
    }

    const bool has_zero = pmin < 1e-10;
    const int m0 = 1; // an m = 0 root exists only as the degenerate E~ = 0 orbit
    if (has_zero) out.levels.push_back({0, eps0, 0.0, 0});

    const double x_min = bx;
    const double et_lo = pmin + std::max(1e-9, 1e-9 * pmin);
    double f_lo = swkb_action(phi, lo, hi, lambda, et_lo, x_min);
    double et_hi, f_hi;
    if (std::isfinite(edge)) {
        et_hi = edge - 1e-9 * std::max(1.0, std::abs(edge));
        f_hi = swkb_action(phi, lo, hi, lambda, et_hi, x_min);
    } else {
        et_hi = et_lo + std::max(1.0, et_lo);
        while ((f_hi = swkb_action(phi, lo, hi, lambda, et_hi, x_min)) <= 2.0 * kPi * m_max) {
            et_hi = et_lo + 2.0 * (et_hi - et_lo);
            if (et_hi - et_lo > 1e12) fail(Errc::NoBoundWindow, "SWKB action fails to reach target");
        }
    }

    for (int m = m0; m <= m_max; ++m) {
        const double target = 2.0 * kPi * m;
        if (target <= f_lo || target >= f_hi) {
            out.omitted_above_window = m_max - m + 1;
            break;
        }
        SolveOut s = solve_target(
            [&](double Et) { return swkb_action(phi, lo, hi, lambda, Et, x_min); }, et_lo, et_hi, f_lo,
            f_hi, target);
        out.levels.push_back({m, eps0 + s.E, s.residual, s.iters});
    }
    return out;
}

} // namespace swkb
