#include "swkb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swkb/errors.hpp"
#include "swkb/numeric.hpp"

namespace swkb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Vr(const PotentialSpec& s, double x) { return std::real(s.potential_jet(Cx(x, 0.0)).f); }

bool endpoint_limit(const PotentialSpec& s, bool upper, double* limit) {
    if (upper && std::isfinite(s.domain.hi)) return false; // pole wall
    if (!upper && std::isfinite(s.domain.lo)) return false;
    return tail_limit([&](double x) { return Vr(s, x); }, upper, limit);
}

// Local expansion V ~ c2/u^2 + c1/u near a finite endpoint (u = distance).
struct PoleCoeffs {
    double c2 = 0, c1 = 0;
};

PoleCoeffs endpoint_pole(const PotentialSpec& s, double x0, int side) {
    const double h = 1e-4;
    auto f = [&](double u) { return u * u * Vr(s, x0 + side * u); };
    const double c2 = 2.0 * f(h) - f(2.0 * h);
    const double c1 = (f(h) - c2) / h;
    return {c2, c1};
}

struct Box {
    double a, b;
    bool sing_a = false, sing_b = false; // regular singular endpoint: power-law start
    PoleCoeffs pa, pb;
};

// March from `from` in direction `dir` until the decay action lambda*int
// sqrt(V-E) exceeds `efolds`; never crosses `bound`.
double extend_tail(const PotentialSpec& s, double E, double from, int dir, double efolds, double bound) {
    double x = from;
    double acc = 0.0;
    double h = 0.02;
    const double cap = std::abs(from) + 80.0 + 60.0 / s.lambda;
    while (acc < efolds && std::abs(x) < cap) {
        double xn = x + dir * h;
        if ((dir > 0 && xn >= bound) || (dir < 0 && xn <= bound)) {
            // Approach the bound geometrically; the pole makes acc blow up first.
            xn = 0.5 * (x + bound);
            h = std::abs(xn - x);
            if (h < 1e-9) return xn;
        }
        const double k0 = std::sqrt(std::max(Vr(s, x) - E, 0.0));
        const double k1 = std::sqrt(std::max(Vr(s, xn) - E, 0.0));
        acc += s.lambda * 0.5 * (k0 + k1) * std::abs(xn - x);
        x = xn;
    }
    return x;
}

// Leftmost/rightmost real point with V <= E (the classical region hull).
std::pair<double, double> classical_hull(const PotentialSpec& s, double E) {
    double lo = std::isfinite(s.domain.lo) ? s.domain.lo + 1e-4 : -35.0;
    double hi = std::isfinite(s.domain.hi) ? s.domain.hi - 1e-4 : 35.0;
    double l = kInf, r = -kInf;
    const int n = 3000;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        if (Vr(s, x) <= E) {
            l = std::min(l, x);
            r = std::max(r, x);
        }
    }
    if (!(l <= r)) fail(Errc::NoBoundWindow, "no classical region at requested energy");
    return {l, r};
}

Box make_box(const PotentialSpec& s, double E_cap, const OracleOptions& opt) {
    Box box{};
    auto hull = classical_hull(s, E_cap);
    if (std::isfinite(s.domain.lo) && s.domain.lo_kind == EndpointKind::SecondOrderPole) {
        box.a = s.domain.lo;
        box.sing_a = true;
        box.pa = endpoint_pole(s, s.domain.lo, +1);
    } else if (std::isfinite(s.domain.lo)) {
        // Higher-order pole wall: truncate deep inside the forbidden region.
        box.a = extend_tail(s, E_cap, hull.first, -1, opt.decay_action + 8.0, s.domain.lo + 1e-5);
    } else {
        box.a = extend_tail(s, E_cap, hull.first, -1, opt.decay_action, -kInf);
    }
    if (std::isfinite(s.domain.hi) && s.domain.hi_kind == EndpointKind::SecondOrderPole) {
        box.b = s.domain.hi;
        box.sing_b = true;
        box.pb = endpoint_pole(s, s.domain.hi, -1);
    } else if (std::isfinite(s.domain.hi)) {
        box.b = extend_tail(s, E_cap, hull.second, +1, opt.decay_action + 8.0, s.domain.hi - 1e-5);
    } else {
        box.b = extend_tail(s, E_cap, hull.second, +1, opt.decay_action, kInf);
    }
    if (!(box.a < box.b)) fail(Errc::GridTooCoarse, "degenerate integration box");
    return box;
}

std::vector<double> sample_grid(const PotentialSpec& s, const Box& box, int n) {
    std::vector<double> V(n + 1);
    const double h = (box.b - box.a) / n;
    for (int i = 0; i <= n; ++i) {
        const double x = box.a + i * h;
        if ((i == 0 && box.sing_a) || (i == n && box.sing_b))
            V[i] = 0.0; // never used by the recurrence
        else
            V[i] = Vr(s, x);
    }
    return V;
}

// Interior sign changes of the left-shooting Numerov solution; equals the
// number of eigenvalues below E (Sturm oscillation).
int count_nodes(const PotentialSpec& s, const Box& box, const std::vector<double>& Vgrid, double E, int n) {
    const double h = (box.b - box.a) / n;
    const double lam2 = s.lambda * s.lambda;
    // Deep classically forbidden values are clamped: psi is monotone there, so
    // the node count is unaffected while the recurrence stays stable.
    auto T = [&](int i) { return std::min(h * h / 12.0 * lam2 * (Vgrid[i] - E), 0.45); };

    double psi_prev, psi_cur;
    int i0;
    if (box.sing_a) {
        const double c2 = std::max(box.pa.c2, 0.0), c1 = box.pa.c1;
        const double sexp = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * lam2 * c2));
        const double a1 = lam2 * c1 / (2.0 * sexp);
        psi_prev = std::pow(h, sexp) * (1.0 + a1 * h);
        psi_cur = std::pow(2.0 * h, sexp) * (1.0 + a1 * 2.0 * h);
        i0 = 2;
    } else {
        psi_prev = 0.0;
        psi_cur = 1e-12;
        i0 = 1;
    }

    int nodes = 0;
    double prev_sign = psi_cur > 0 ? 1.0 : -1.0;
    for (int i = i0; i < n; ++i) {
        const double next = ((2.0 + 10.0 * T(i)) * psi_cur - (1.0 - T(i - 1)) * psi_prev) / (1.0 - T(i + 1));
        psi_prev = psi_cur;
        psi_cur = next;
        if (std::abs(psi_cur) > 1e120) {
            psi_prev *= 1e-120;
            psi_cur *= 1e-120;
        }
        const double sgn = psi_cur > 0 ? 1.0 : (psi_cur < 0 ? -1.0 : prev_sign);
        if (sgn != prev_sign) ++nodes;
        prev_sign = sgn;
    }
    return nodes;
}

struct LevelSolve {
    double E;
    int iters;
};

LevelSolve solve_level(const PotentialSpec& s, const Box& box, const std::vector<double>& Vg, int n, int m,
                       double E_lo, double E_hi, double rel) {
    int iters = 0;
    double lo = E_lo, hi = E_hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break; // floating-point resolution reached
        ++iters;
        if (count_nodes(s, box, Vg, mid, n) >= m + 1)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= rel * std::max(1.0, std::abs(mid))) break;
    }
    return {0.5 * (lo + hi), iters};
}

} // namespace

SpectrumResult oracle_spectrum(const PotentialSpec& spec, int m_max, double tol, const OracleOptions& opt) {
    SpectrumResult out;
    out.method = Method::ORACLE;
    out.label = family_name(spec.family);
    out.requested_m_max = m_max;

    double lo = std::isfinite(spec.domain.lo) ? spec.domain.lo + 1e-4 : -35.0;
    double hi = std::isfinite(spec.domain.hi) ? spec.domain.hi - 1e-4 : 35.0;
    double vmin = kInf;
    for (int i = 0; i <= 6000; ++i) {
        const double x = lo + (hi - lo) * i / 6000.0;
        vmin = std::min(vmin, Vr(spec, x));
    }
    double edge = kInf;
    for (bool upper : {false, true}) {
        double lim;
        if (endpoint_limit(spec, upper, &lim)) edge = std::min(edge, lim);
    }

    // Phase 1: locate an energy cap holding m_max+1 levels (or the continuum edge).
    const int n_scout = std::max(4000, opt.base_points / 3);
    auto levels_below = [&](double E) {
        Box bx = make_box(spec, E, opt);
        std::vector<double> Vg = sample_grid(spec, bx, n_scout);
        return count_nodes(spec, bx, Vg, E, n_scout);
    };
    double E_top;
    int n_levels;
    if (std::isfinite(edge)) {
        const double E_edge = edge - 1e-7 * std::max(1.0, std::abs(edge));
        const int have = levels_below(E_edge);
        n_levels = std::min(m_max + 1, have);
        E_top = E_edge;
        if (n_levels <= 0) {
            out.omitted_above_window = m_max + 1;
            return out;
        }
    } else {
        double span = std::max(1.0, 1e-2 * std::abs(vmin));
        while (levels_below(vmin + span) < m_max + 1) {
            span *= 2.0;
            if (span > 1e12) fail(Errc::NoBoundWindow, "cannot bracket requested levels");
        }
        E_top = vmin + span;
        n_levels = m_max + 1;
    }
    // Tighten the cap to just above the highest wanted level.
    {
        double lo_e = vmin, hi_e = E_top;
        for (int it = 0; it < 30; ++it) {
            const double mid = 0.5 * (lo_e + hi_e);
            if (levels_below(mid) >= n_levels)
                hi_e = mid;
            else
                lo_e = mid;
        }
        E_top = std::min(E_top, hi_e + 0.05 * (hi_e - vmin) + 1e-6);
        if (std::isfinite(edge)) E_top = std::min(E_top, edge - 1e-7 * std::max(1.0, std::abs(edge)));
    }
    out.omitted_above_window = (m_max + 1) - n_levels;

    const Box box = make_box(spec, E_top, opt);

    out.levels.resize(n_levels);
    // Refine the grid (up to 4x) when the two-grid disagreement misses tol.
    for (int refine = 1; refine <= 4; refine *= 2) {
        const int n1 = opt.base_points * refine, n2 = 2 * n1;
        const std::vector<double> Vg1 = sample_grid(spec, box, n1);
        const std::vector<double> Vg2 = sample_grid(spec, box, n2);
        bool coarse = false;
        parallel_for_index((size_t)n_levels, [&](size_t im) {
            const int m = (int)im;
            const LevelSolve c = solve_level(spec, box, Vg1, n1, m, vmin, E_top, opt.bisect_rel);
            const LevelSolve f = solve_level(spec, box, Vg2, n2, m, vmin, E_top, opt.bisect_rel);
            const double gap = (f.E - c.E) / 15.0;
            const double E = f.E + gap; // h^4 Richardson
            if (std::abs(gap) > tol * std::max(1.0, std::abs(E))) coarse = true;
            out.levels[im] = {m, E, std::abs(gap), c.iters + f.iters};
        });
        if (!coarse) return out;
    }
    fail(Errc::GridTooCoarse, "two-grid Richardson disagreement exceeds tolerance");
}

double oracle_level_raw(const PotentialSpec& spec, int m, double E_cap_hint, int n_points,
                        const OracleOptions& opt) {
    double lo = std::isfinite(spec.domain.lo) ? spec.domain.lo + 1e-4 : -35.0;
    double hi = std::isfinite(spec.domain.hi) ? spec.domain.hi - 1e-4 : 35.0;
    double vmin = kInf;
    for (int i = 0; i <= 6000; ++i) vmin = std::min(vmin, Vr(spec, lo + (hi - lo) * i / 6000.0));
    const Box box = make_box(spec, E_cap_hint, opt);
    const std::vector<double> Vg = sample_grid(spec, box, n_points);
    return solve_level(spec, box, Vg, n_points, m, vmin, E_cap_hint, opt.bisect_rel).E;
}

int oracle_node_count(const PotentialSpec& spec, double E, int n_points, const OracleOptions& opt) {
    const Box box = make_box(spec, E, opt);
    const std::vector<double> Vg = sample_grid(spec, box, n_points);
    return count_nodes(spec, box, Vg, E, n_points);
}

ComparisonReport compare_spectra(const SpectrumResult& a, const SpectrumResult& b, double tol,
                                 Alignment align) {
    if (a.levels.empty() || b.levels.empty()) fail(Errc::EmptySpectrum, "spectrum comparison with empty input");
    ComparisonReport rep;
    rep.tol = tol;
    if (align == Alignment::ByM) {
        for (const auto& la : a.levels) {
            for (const auto& lb : b.levels) {
                if (la.m != lb.m) continue;
                ComparisonRow r;
                r.m = la.m;
                r.E_a = la.E;
                r.E_b = lb.E;
                r.abs_diff = std::abs(la.E - lb.E);
                r.rel_diff = r.abs_diff / std::max(1.0, std::abs(la.E));
                rep.rows.push_back(r);
            }
        }
    } else {
        const size_t n = std::min(a.levels.size(), b.levels.size());
        for (size_t i = 0; i < n; ++i) {
            ComparisonRow r;
            r.m = (int)i;
            r.E_a = a.levels[i].E;
            r.E_b = b.levels[i].E;
            r.abs_diff = std::abs(r.E_a - r.E_b);
            r.rel_diff = r.abs_diff / std::max(1.0, std::abs(r.E_a));
            rep.rows.push_back(r);
        }
    }
    if (rep.rows.empty()) fail(Errc::EmptySpectrum, "no aligned levels");
    for (const auto& r : rep.rows) {
        rep.max_abs_diff = std::max(rep.max_abs_diff, r.abs_diff);
        rep.max_rel_diff = std::max(rep.max_rel_diff, r.rel_diff);
    }
    rep.match = rep.max_rel_diff <= tol;
    return rep;
}

} // namespace swkb
