#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "swkb/errors.hpp"

namespace swkb {

using Cx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton on P_n.
// ---------------------------------------------------------------------------
struct GaussLegendre {
    std::vector<double> x, w;
    explicit GaussLegendre(int n) : x(n), w(n) {
        for (int i = 0; i < n; ++i) {
            double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double p0 = 0, p1 = 0;
            for (int it = 0; it < 100; ++it) {
                p0 = 1.0;
                p1 = t;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            p0 = 1.0;
            p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

inline const GaussLegendre& gl12() { static const GaussLegendre g(12); return g; }
inline const GaussLegendre& gl24() { static const GaussLegendre g(24); return g; }

// Integrates f over [a,b] with adaptive bisection; the error estimate per panel
// is |GL24 - GL12|. Evaluation order is strictly left to right so callers may
// carry branch state inside f.
struct QuadResult {
    Cx value{0.0, 0.0};
    double abs_error = 0.0;
    long evals = 0;
};

template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, double tol, int max_depth = 48) {
    QuadResult out;
    // Left-first recursion so evaluation order follows the path; node tables are
    // stored in descending t, hence the reversed indexing.
    std::function<void(double, double, int)> rec = [&](double lo, double hi, int depth) {
        const double h = 0.5 * (hi - lo), c = 0.5 * (lo + hi);
        Cx s12{0, 0}, s24{0, 0};
        const auto& g1 = gl12();
        const auto& g2 = gl24();
        for (int i = 0; i < 24; ++i) s24 += g2.w[23 - i] * f(c + h * g2.x[23 - i]);
        for (int i = 0; i < 12; ++i) s12 += g1.w[11 - i] * f(c + h * g1.x[11 - i]);
        out.evals += 36;
        s12 *= h;
        s24 *= h;
        const double err = std::abs(s24 - s12);
        if (err <= tol || depth >= max_depth || hi - lo < 1e-14 * (1.0 + std::abs(lo) + std::abs(hi))) {
            out.value += s24;
            out.abs_error += err;
            return;
        }
        rec(lo, c, depth + 1);
        rec(c, hi, depth + 1);
    };
    if (a == b) return out;
    rec(a, b, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Branch-continuous square root along a 1-D path.
//
// Builds a reference chain of sqrt values by sampling g(t) on [0,1] densely
// enough that consecutive principal roots are unambiguous, then answers
// queries at arbitrary t by matching the sign of the nearest reference.
// ---------------------------------------------------------------------------
class BranchedSqrt {
public:
    // g: t in [0,1] -> complex value (the function under the root).
    // anchor: desired sqrt value at t=0 (its sign selects the branch).
    template <typename G>
    BranchedSqrt(G&& g, Cx anchor, int initial = 64) {
        // Coarse pass for the magnitude scale.
        double vmax = 0.0;
        std::vector<Cx> coarse(initial + 1);
        for (int i = 0; i <= initial; ++i) {
            coarse[i] = std::sqrt(Cx(g(double(i) / initial)));
            vmax = std::max(vmax, std::abs(coarse[i]));
        }
        const double floor_v = 1e-7 * (vmax > 0 ? vmax : 1.0);
        Cx v0 = coarse[0];
        if (std::abs(v0 - anchor) > std::abs(v0 + anchor)) v0 = -v0;
        ts_.push_back(0.0);
        vs_.push_back(v0);
        // In-order recursive refinement; intervals where both values sit near
        // zero (a turning point) are left alone, the neighbours fix the sign.
        std::function<void(double, Cx, double, Cx, int)> rec = [&](double t0, Cx a, double t1, Cx b,
                                                                   int depth) {
            Cx bb = b;
            if (std::abs(bb - a) > std::abs(bb + a)) bb = -bb;
            const double scale = std::max(std::abs(a), std::abs(bb));
            const bool resolved = std::abs(bb - a) <= 0.5 * scale || scale < floor_v ||
                                  t1 - t0 < 1e-7 || depth > 24;
            if (!resolved) {
                const double tm = 0.5 * (t0 + t1);
                Cx vm = std::sqrt(Cx(g(tm)));
                if (std::abs(vm - a) > std::abs(vm + a)) vm = -vm;
                rec(t0, a, tm, vm, depth + 1);
                rec(tm, vs_.back(), t1, b, depth + 1);
                return;
            }
            ts_.push_back(t1);
            vs_.push_back(bb);
        };
        for (int i = 0; i < initial; ++i)
            rec(double(i) / initial, vs_.back(), double(i + 1) / initial, coarse[i + 1], 0);
    }

    // Branch-corrected sqrt of value q at parameter t.
    Cx eval(double t, Cx q) const {
        Cx r = std::sqrt(q);
        const Cx ref = nearest(t);
        if (std::abs(r - ref) > std::abs(r + ref)) r = -r;
        return r;
    }

    Cx value_at_end() const { return vs_.back(); }
    Cx value_at_start() const { return vs_.front(); }

private:
    Cx nearest(double t) const {
        auto it = std::lower_bound(ts_.begin(), ts_.end(), t);
        if (it == ts_.end()) return vs_.back();
        if (it == ts_.begin()) return vs_.front();
        size_t hi = size_t(it - ts_.begin());
        return (t - ts_[hi - 1] < ts_[hi] - t) ? vs_[hi - 1] : vs_[hi];
    }
    std::vector<double> ts_;
    std::vector<Cx> vs_;
};

// ---------------------------------------------------------------------------
// Scalar root helpers.
// ---------------------------------------------------------------------------

// Roots of a*x^2 + b*x + c = 0 over the complex numbers.
inline std::array<Cx, 2> solve_quadratic(Cx a, Cx b, Cx c) {
    if (std::abs(a) == 0.0) {
        if (std::abs(b) == 0.0) fail(Errc::DegenerateRoot, "degenerate quadratic");
        return {-c / b, -c / b};
    }
    const Cx d = std::sqrt(b * b - 4.0 * a * c);
    // Use the numerically stable pairing.
    const Cx q = (std::real(std::conj(b) * d) >= 0.0) ? -0.5 * (b + d) : -0.5 * (b - d);
    if (std::abs(q) == 0.0) return {Cx(0), Cx(0)};
    return {q / a, c / q};
}

// Roots of x^3 + p2*x^2 + p1*x + p0 = 0 (real coefficients, complex roots),
// via one real root from Newton/bisection then quadratic deflation.
inline std::array<Cx, 3> solve_cubic_monic(double p2, double p1, double p0) {
    auto f = [&](double x) { return ((x + p2) * x + p1) * x + p0; };
    double lo = -1.0, hi = 1.0;
    double bound = 1.0 + std::max({std::abs(p2), std::abs(p1), std::abs(p0)});
    lo = -bound - 1.0;
    hi = bound + 1.0;
    // f(lo)<0<f(hi) always for monic cubic with these bounds.
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 40; ++it) {
        double fr = f(r);
        double dr = (3.0 * r + 2.0 * p2) * r + p1;
        if (dr == 0) break;
        double step = fr / dr;
        r -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(r))) break;
    }
    // Deflate: x^3+p2 x^2+p1 x+p0 = (x-r)(x^2 + b x + c)
    const double b = p2 + r;
    const double c = p1 + r * b;
    auto q = solve_quadratic(Cx(1.0), Cx(b), Cx(c));
    return {Cx(r), q[0], q[1]};
}

// Bisection for a continuous real function with a sign change on [lo,hi].
template <typename F>
double bisect(F&& f, double lo, double hi, double flo, int iters = 200, double xtol = 0.0) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (xtol > 0 && hi - lo < xtol) break;
    }
    return 0.5 * (lo + hi);
}

// Golden-section minimum of a unimodal function on [a,b].
template <typename F>
double golden_min(F&& f, double a, double b, int iters = 160) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Deterministic parallel map: results land at their own indices; thread count
// capped by the STOKES_WKB_THREADS environment variable.
// ---------------------------------------------------------------------------
inline unsigned thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned cap = std::min(hw, 4u);
    if (const char* env = std::getenv("STOKES_WKB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) cap = (unsigned)std::min<long>(v, 64);
    }
    return cap;
}

template <typename Fn>
void parallel_for_index(size_t n, Fn&& body) {
    const unsigned nt = std::min<size_t>(thread_cap(), n ? n : 1);
    if (nt <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nt);
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (size_t i = t; i < n; i += nt) body(i);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace swkb
