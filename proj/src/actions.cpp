#include "swkb/actions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swkb/errors.hpp"
#include "swkb/numeric.hpp"

namespace swkb {

namespace {

double q_scale(double E) { return 1.0 + std::abs(E); }

void check_path_clear(const PotentialSpec& spec, const std::vector<Cx>& pts) {
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const Cx z = pts[i] + t * (pts[i + 1] - pts[i]);
            if (spec.pole_distance(z) < kPoleGuard) fail(Errc::PathThroughPole, "path point within pole_guard");
        }
    }
}

// Integrate sqrt(q~) over one straight segment with branch continuity anchored
// at `anchor` (value of the root at the segment start; zero magnitude means
// "principal branch of the first interior sample"). Returns the value and sets
// `end_value` to the branch value at the segment end.
QuadResult segment_sqrt_integral(const PotentialSpec& spec, double E, Cx a, Cx b, Cx anchor, Cx* end_value,
                                 double tol) {
    const Cx d = b - a;
    auto g = [&](double u) { return spec.q_tilde_unguarded(a + u * d, E); };
    const double scale = q_scale(E);
    const bool sing_a = std::abs(g(0.0)) < 1e-9 * scale;
    const bool sing_b = std::abs(g(1.0)) < 1e-9 * scale;

    Cx anchor_eff = anchor;
    if (std::abs(anchor_eff) == 0.0) anchor_eff = std::sqrt(g(sing_a ? 0.02 : 0.0));
    BranchedSqrt chain(g, anchor_eff);

    auto integrand_u = [&](double u) { return chain.eval(u, g(u)) * d; };

    QuadResult total;
    auto add = [&](const QuadResult& r) {
        total.value += r.value;
        total.abs_error += r.abs_error;
        total.evals += r.evals;
    };
    // Square-root endpoint substitution u = s^2 (resp. 1-s^2) where needed.
    // u = s^2 at a singular start; u = 1 - s^2 (du = -2 s ds) at a singular
    // end, traversed with s decreasing so evaluation stays left-to-right.
    if (sing_a && sing_b) {
        add(integrate_adaptive([&](double s) { return integrand_u(s * s) * (2.0 * s); }, 0.0,
                               std::sqrt(0.5), tol));
        add(integrate_adaptive([&](double s) { return integrand_u(1.0 - s * s) * (-2.0 * s); },
                               std::sqrt(0.5), 0.0, tol));
    } else if (sing_a) {
        add(integrate_adaptive([&](double s) { return integrand_u(s * s) * (2.0 * s); }, 0.0, 1.0, tol));
    } else if (sing_b) {
        add(integrate_adaptive([&](double s) { return integrand_u(1.0 - s * s) * (-2.0 * s); }, 1.0, 0.0,
                               tol));
    } else {
        add(integrate_adaptive(integrand_u, 0.0, 1.0, tol));
    }
    if (end_value) *end_value = chain.value_at_end();
    return total;
}

} // namespace

ActionValue action_along(const PotentialSpec& spec, double E, const std::vector<Cx>& pts, double tol) {
    if (pts.size() < 2) return {Cx(0, 0), 0.0, "empty"};
    check_path_clear(spec, pts);
    ActionValue out;
    Cx carry(0.0, 0.0);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (std::abs(pts[i + 1] - pts[i]) == 0.0) continue;
        Cx endv;
        QuadResult r = segment_sqrt_integral(spec, E, pts[i], pts[i + 1], carry, &endv, tol);
        out.value += r.value;
        out.abs_error_estimate += r.abs_error;
        carry = endv;
    }
    std::ostringstream ss;
    ss << "polyline[" << pts.size() << "] " << pts.front() << " -> " << pts.back();
    out.path_descriptor = ss.str();
    return out;
}

ActionValue action_between(const PotentialSpec& spec, double E, Cx x1, Cx x2, PathKind kind, double tol) {
    (void)kind;
    return action_along(spec, E, {x1, x2}, tol);
}

ActionValue contour_action(const PotentialSpec& spec, double E, std::pair<double, double> pair, double tol) {
    const double xm = pair.first, xp = pair.second;
    if (!(xm < xp)) fail(Errc::NoBoundWindow, "turning pair not ordered");
    auto f = [&](double x) {
        const double v = -std::real(spec.q_tilde_unguarded(Cx(x, 0.0), E));
        return Cx(std::sqrt(std::max(v, 0.0)), 0.0);
    };
    const double mid = 0.5 * (xm + xp);
    // x = xm + t^2 on the left half, x = xp - t^2 on the right.
    const double tl = std::sqrt(mid - xm), tr = std::sqrt(xp - mid);
    QuadResult L = integrate_adaptive([&](double t) { return f(xm + t * t) * (2.0 * t); }, 0.0, tl, tol);
    QuadResult R = integrate_adaptive([&](double t) { return f(xp - t * t) * (2.0 * t); }, tr, 0.0, tol);
    const double I = std::real(L.value) - std::real(R.value);
    ActionValue out;
    out.value = Cx(0.0, 2.0 * spec.lambda * I);
    out.abs_error_estimate = 2.0 * spec.lambda * (L.abs_error + R.abs_error);
    std::ostringstream ss;
    ss << "contour around [" << xm << ", " << xp << "]";
    out.path_descriptor = ss.str();
    return out;
}

ActionValue contour_action(const PotentialSpec& spec, double E, double tol) {
    return contour_action(spec, E, real_turning_pair(spec, E), tol);
}

ActionValue contour_action_loop(const PotentialSpec& spec, double E, std::pair<double, double> pair,
                                double tol) {
    const double xm = pair.first, xp = pair.second;
    double h = std::min(0.35, 0.3 * (xp - xm));
    double d = h;
    // Keep the loop inside the domain and clear of the pole lattice.
    if (spec.domain.lo_kind != EndpointKind::Infinity && std::isfinite(spec.domain.lo))
        d = std::min(d, 0.5 * (xm - spec.domain.lo));
    if (spec.domain.hi_kind != EndpointKind::Infinity && std::isfinite(spec.domain.hi))
        d = std::min(d, 0.5 * (spec.domain.hi - xp));
    h = std::min(h, d);
    const Cx I(0.0, 1.0);
    std::vector<Cx> loop = {Cx(xm - d, 0.0) - I * h, Cx(xp + d, 0.0) - I * h, Cx(xp + d, 0.0) + I * h,
                            Cx(xm - d, 0.0) + I * h, Cx(xm - d, 0.0) - I * h};
    ActionValue seg = action_along(spec, E, loop, tol);
    Cx a = -spec.lambda * seg.value;
    if (a.imag() < 0) a = -a;
    ActionValue out;
    out.value = a;
    out.abs_error_estimate = spec.lambda * seg.abs_error_estimate;
    out.path_descriptor = "closed stadium loop (independent route)";
    return out;
}

Cx chi_first_order(const PotentialSpec& spec, double E, const Polyline& path, int sigma, double tol) {
    if (sigma != 1 && sigma != -1) fail(Errc::BadConfig, "sigma must be +-1");
    const auto& pts = path.points;
    if (pts.size() < 2) fail(Errc::BadConfig, "chi path needs at least two points");
    check_path_clear(spec, pts);

    // Arc-length parameterization t in [0,1].
    std::vector<double> cum(pts.size(), 0.0);
    for (size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + std::abs(pts[i] - pts[i - 1]);
    const double L = cum.back();
    if (L == 0.0) fail(Errc::BadConfig, "degenerate chi path");
    auto at = [&](double t) -> std::pair<Cx, Cx> { // position, dz/dt
        const double s = t * L;
        size_t i = size_t(std::upper_bound(cum.begin(), cum.end(), s) - cum.begin());
        if (i == 0) i = 1;
        if (i >= pts.size()) i = pts.size() - 1;
        const Cx d = pts[i] - pts[i - 1];
        const double seg = std::abs(d);
        if (seg == 0.0) return {pts[i - 1], Cx(0.0, 0.0)};
        const double u = (s - cum[i - 1]) / seg;
        return {pts[i - 1] + u * d, d * (L / seg)};
    };

    auto qval = [&](double t) { return spec.q_tilde_unguarded(at(t).first, E); };
    BranchedSqrt chain(qval, std::sqrt(qval(0.0)));

    // Cumulative W(x)-W(y(t)) accumulated backward from the anchor on a fixed
    // composite Gauss grid.
    const int M = 2048;
    std::vector<Cx> dW(M + 1, Cx(0, 0)); // dW[k] = int_{t_k}^{1} sqrt(q~) dz
    const auto& g = gl12();
    std::vector<Cx> cell(M, Cx(0, 0));
    for (int k = 0; k < M; ++k) {
        const double t0 = double(k) / M, t1 = double(k + 1) / M;
        const double hc = 0.5 * (t1 - t0), cc = 0.5 * (t0 + t1);
        Cx s(0, 0);
        for (int i = 0; i < 12; ++i) {
            const double t = cc + hc * g.x[11 - i];
            auto [z, dz] = at(t);
            s += g.w[11 - i] * chain.eval(t, spec.q_tilde_unguarded(z, E)) * dz;
        }
        cell[k] = s * hc;
    }
    for (int k = M - 1; k >= 0; --k) dW[k] = dW[k + 1] + cell[k];

    auto deltaW = [&](double t) -> Cx {
        int k = std::min(M - 1, (int)std::floor(t * M));
        const double t1 = double(k + 1) / M;
        // Remaining piece of the cell [t, t1] by 12-point Gauss.
        const double hc = 0.5 * (t1 - t), cc = 0.5 * (t1 + t);
        Cx s(0, 0);
        if (t1 > t) {
            for (int i = 0; i < 12; ++i) {
                const double tt = cc + hc * g.x[11 - i];
                auto [z, dz] = at(tt);
                s += g.w[11 - i] * chain.eval(tt, spec.q_tilde_unguarded(z, E)) * dz;
            }
            s *= hc;
        }
        return dW[k + 1] + s;
    };

    // Canonicality: Re(sigma * deltaW) must stay nonnegative and non-increasing.
    double scale = 0.0;
    std::vector<double> re_check(257);
    for (int i = 0; i <= 256; ++i) {
        re_check[i] = sigma * std::real(deltaW(double(i) / 256));
        scale = std::max(scale, std::abs(re_check[i]));
    }
    const double ctol = 1e-6 * (1.0 + scale);
    for (int i = 0; i <= 256; ++i) {
        if (re_check[i] < -ctol) fail(Errc::NonCanonicalPath, "Re(sigma W) changes sign along path");
        if (i > 0 && re_check[i] > re_check[i - 1] + ctol)
            fail(Errc::NonCanonicalPath, "Re(sigma W) not monotone along path");
    }

    auto omega = [&](double t, Cx z) -> Cx {
        const Jet2 q = spec.q_tilde_jet(z, E);
        const double l2 = spec.lambda * spec.lambda;
        const Cx delta_eff = spec.delta_jet(z).f + l2 * spec.extra_jet(z).f;
        const Cx rt = chain.eval(t, q.f);
        const Cx q32 = q.f * rt, q52 = q.f * q.f * rt;
        return delta_eff / rt - 0.25 * q.f2 / q32 + (5.0 / 16.0) * q.f1 * q.f1 / q52;
    };

    auto integrand = [&](double t) -> Cx {
        auto [z, dz] = at(t);
        const Cx w = -2.0 * double(sigma) * spec.lambda * deltaW(t);
        Cx e(0.0, 0.0);
        if (w.real() > -700.0) e = std::exp(w);
        return omega(t, z) * (Cx(1.0, 0.0) - e) * dz;
    };

    QuadResult r = integrate_adaptive(integrand, 0.0, 1.0, tol);
    return (-double(sigma) / (2.0 * spec.lambda)) * r.value;
}

} // namespace swkb
