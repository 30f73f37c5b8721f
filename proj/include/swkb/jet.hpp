#pragma once

#include <cmath>
#include <complex>

namespace swkb {

using Cx = std::complex<double>;

// 2-jet of an analytic function: value, first and second derivative at a point.
// Arithmetic propagates derivatives, so potentials written once in Jet2 terms
// yield exact V, V', V'' (needed by the omega integrand of the chi series).
struct Jet2 {
    Cx f{0.0, 0.0};
    Cx f1{0.0, 0.0};
    Cx f2{0.0, 0.0};

    Jet2() = default;
    Jet2(Cx v, Cx d1, Cx d2) : f(v), f1(d1), f2(d2) {}

    static Jet2 constant(Cx c) { return {c, 0.0, 0.0}; }
    static Jet2 variable(Cx x) { return {x, 1.0, 0.0}; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.f + b.f, a.f1 + b.f1, a.f2 + b.f2}; }
inline Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.f - b.f, a.f1 - b.f1, a.f2 - b.f2}; }
inline Jet2 operator-(const Jet2& a) { return {-a.f, -a.f1, -a.f2}; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.f * b.f, a.f1 * b.f + a.f * b.f1, a.f2 * b.f + 2.0 * a.f1 * b.f1 + a.f * b.f2};
}

inline Jet2 operator*(Cx c, const Jet2& a) { return {c * a.f, c * a.f1, c * a.f2}; }
inline Jet2 operator*(double c, const Jet2& a) { return {c * a.f, c * a.f1, c * a.f2}; }
inline Jet2 operator*(const Jet2& a, Cx c) { return c * a; }
inline Jet2 operator*(const Jet2& a, double c) { return c * a; }
inline Jet2 operator+(const Jet2& a, Cx c) { return {a.f + c, a.f1, a.f2}; }
inline Jet2 operator+(Cx c, const Jet2& a) { return a + c; }
inline Jet2 operator+(const Jet2& a, double c) { return {a.f + c, a.f1, a.f2}; }
inline Jet2 operator-(const Jet2& a, Cx c) { return {a.f - c, a.f1, a.f2}; }
inline Jet2 operator-(const Jet2& a, double c) { return {a.f - c, a.f1, a.f2}; }
inline Jet2 operator-(Cx c, const Jet2& a) { return {c - a.f, -a.f1, -a.f2}; }
inline Jet2 operator-(double c, const Jet2& a) { return {c - a.f, -a.f1, -a.f2}; }

inline Jet2 inv(const Jet2& a) {
    const Cx i1 = 1.0 / a.f;
    const Cx i2 = i1 * i1;
    return {i1, -a.f1 * i2, (2.0 * a.f1 * a.f1 * i1 - a.f2) * i2};
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * inv(b); }
inline Jet2 operator/(const Jet2& a, Cx c) { return (1.0 / c) * a; }
inline Jet2 operator/(const Jet2& a, double c) { return (1.0 / c) * a; }
inline Jet2 operator/(Cx c, const Jet2& a) { return c * inv(a); }
inline Jet2 operator/(double c, const Jet2& a) { return c * inv(a); }

// Composition with a scalar analytic g given g(f), g'(f), g''(f).
inline Jet2 compose(Cx g, Cx g1, Cx g2, const Jet2& a) {
    return {g, g1 * a.f1, g2 * a.f1 * a.f1 + g1 * a.f2};
}

inline Jet2 exp(const Jet2& a) {
    const Cx e = std::exp(a.f);
    return compose(e, e, e, a);
}

inline Jet2 sin(const Jet2& a) {
    const Cx s = std::sin(a.f), c = std::cos(a.f);
    return compose(s, c, -s, a);
}

inline Jet2 cos(const Jet2& a) {
    const Cx s = std::sin(a.f), c = std::cos(a.f);
    return compose(c, -s, -c, a);
}

inline Jet2 sinh(const Jet2& a) {
    const Cx s = std::sinh(a.f), c = std::cosh(a.f);
    return compose(s, c, s, a);
}

inline Jet2 cosh(const Jet2& a) {
    const Cx s = std::sinh(a.f), c = std::cosh(a.f);
    return compose(c, s, c, a);
}

inline Jet2 sqr(const Jet2& a) { return a * a; }

inline Jet2 tan(const Jet2& a) { return sin(a) / cos(a); }
inline Jet2 tanh(const Jet2& a) { return sinh(a) / cosh(a); }

} // namespace swkb
