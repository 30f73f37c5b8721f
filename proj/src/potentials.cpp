#include "swkb/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "swkb/errors.hpp"
#include "swkb/numeric.hpp"

#include <json.hpp>

namespace swkb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FamilyInfo {
    const char* name;
    std::vector<std::string> param_keys;
};

const FamilyInfo& info(Family f) {
    static const std::map<Family, FamilyInfo> table = {
        {Family::Harmonic, {"harmonic", {"alpha"}}},
        {Family::Morse, {"morse", {"alpha", "beta"}}},
        {Family::ExpWell, {"exp-well", {"alpha", "gamma"}}},
        {Family::CubicExp, {"cubic-exp", {"alpha", "beta_plus", "beta_minus", "gamma"}}},
        {Family::ExpWell2, {"exp-well-2", {"alpha", "beta_plus", "beta_minus", "gamma"}}},
        {Family::Coulomb, {"coulomb", {"alpha", "beta"}}},
        {Family::RadialHarmonic, {"radial-harmonic", {"alpha", "beta"}}},
        {Family::InvQuartic, {"inv-quartic", {"alpha", "beta"}}},
        {Family::Eckart, {"eckart", {"alpha", "beta"}}},
        {Family::SinhWell, {"sinh-well", {"alpha", "beta"}}},
        {Family::PoschlTeller, {"poschl-teller", {"beta", "beta_prime"}}},
        {Family::TrigWell, {"trig-well", {"alpha"}}},
        {Family::TrigBox, {"trig-box", {"alpha", "beta"}}},
        {Family::ScarfTrig, {"scarf-trig", {"alpha", "beta"}}},
        {Family::ScarfHyp, {"scarf-hyp", {"alpha", "beta"}}},
        {Family::CoshPoleWell, {"cosh-pole-well", {"alpha", "beta", "a"}}},
        {Family::SinhPoleWell, {"sinh-pole-well", {"alpha", "beta"}}},
    };
    return table.at(f);
}

void require(bool ok, const std::string& ineq) {
    if (!ok) fail(Errc::ParamOutOfRange, "violated: " + ineq);
}

} // namespace

const char* family_name(Family f) { return info(f).name; }

Family family_from_name(const std::string& name) {
    for (Family f : {Family::Harmonic, Family::Morse, Family::ExpWell, Family::CubicExp, Family::ExpWell2,
                     Family::Coulomb, Family::RadialHarmonic, Family::InvQuartic, Family::Eckart,
                     Family::SinhWell, Family::PoschlTeller, Family::TrigWell, Family::TrigBox,
                     Family::ScarfTrig, Family::ScarfHyp, Family::CoshPoleWell, Family::SinhPoleWell}) {
        if (name == info(f).name) return f;
    }
    fail(Errc::BadConfig, "unknown family '" + name + "'");
}

double PotentialSpec::param(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) fail(Errc::BadConfig, "missing param '" + key + "'");
    return it->second;
}

Jet2 PotentialSpec::potential_jet(Cx z) const {
    const Jet2 x = Jet2::variable(z);
    switch (family) {
        case Family::Harmonic: {
            const double a = param("alpha");
            return (a * a) * sqr(x);
        }
        case Family::Morse: {
            const double a = param("alpha"), b = param("beta");
            const Jet2 u = exp(x);
            return (a * a) * sqr(u) - (2.0 * b) * u;
        }
        case Family::ExpWell: {
            const double a = param("alpha"), g = param("gamma");
            return a * exp(x) + g * exp(-x);
        }
        case Family::CubicExp: {
            const double a = param("alpha"), bp = param("beta_plus"), bm = param("beta_minus"),
                         g = param("gamma");
            const Jet2 u = exp(x);
            return a * ((u - bp) * (u - bm) * (u + g));
        }
        case Family::ExpWell2: {
            const double a = param("alpha"), bp = param("beta_plus"), bm = param("beta_minus"),
                         g = param("gamma");
            const Jet2 u = exp(x);
            return a * ((u - bp) * (u - bm) * (exp(-x) + g));
        }
        case Family::Coulomb: {
            const double a = param("alpha"), b = param("beta");
            return -a * inv(x) + b * inv(sqr(x));
        }
        case Family::RadialHarmonic: {
            const double a = param("alpha"), b = param("beta");
            return (a * a) * sqr(x) + b * inv(sqr(x));
        }
        case Family::InvQuartic: {
            const double a = param("alpha"), b = param("beta");
            return a * inv(sqr(sqr(x))) - b * inv(sqr(x));
        }
        case Family::Eckart: {
            const double a = param("alpha"), b = param("beta");
            return (a * exp(x) - b) * inv(sqr(cosh(0.5 * x)));
        }
        case Family::SinhWell: {
            const double a = param("alpha"), b = param("beta");
            return (a * exp(x) + b) * inv(sqr(sinh(0.5 * x)));
        }
        case Family::PoschlTeller: {
            const double b = param("beta"), bp = param("beta_prime");
            return b * inv(sqr(sinh(0.5 * x))) - bp * inv(sqr(cosh(0.5 * x)));
        }
        case Family::TrigWell: {
            const double a = param("alpha");
            return a * inv(sqr(cos(0.5 * x)));
        }
        case Family::TrigBox: {
            const double a = param("alpha"), b = param("beta");
            return a * inv(sqr(cos(0.5 * x))) + b * inv(sqr(sin(0.5 * x)));
        }
        case Family::ScarfTrig: {
            const double a = param("alpha"), b = param("beta");
            return (a + b * sin(x)) * inv(sqr(cos(x)));
        }
        case Family::ScarfHyp: {
            const double a = param("alpha"), b = param("beta");
            return (a + b * sinh(x)) * inv(sqr(cosh(x)));
        }
        case Family::CoshPoleWell: {
            const double a = param("alpha"), b = param("beta"), p = param("a");
            return (a * exp(x) + b) * inv(cosh(x) - std::cos(p));
        }
        case Family::SinhPoleWell: {
            const double a = param("alpha"), b = param("beta");
            return (a * exp(x) + b) * inv(sinh(x));
        }
    }
    fail(Errc::BadConfig, "unhandled family");
}

Jet2 PotentialSpec::delta_jet(Cx z) const {
    Jet2 sum = Jet2::constant(0.0);
    if (langer_delta.empty()) return sum;
    const Jet2 x = Jet2::variable(z);
    for (const auto& t : langer_delta) {
        Jet2 f = Jet2::constant(1.0);
        switch (t.shape) {
            case DeltaTerm::Shape::InvX:     f = 2.0 * x; break;
            case DeltaTerm::Shape::SinhHalf: f = 2.0 * sinh(0.5 * (x - t.x0)); break;
            case DeltaTerm::Shape::CoshHalf: f = 2.0 * cosh(0.5 * x); break;
            case DeltaTerm::Shape::SinHalf:  f = 2.0 * sin(0.5 * x); break;
            case DeltaTerm::Shape::CosHalf:  f = 2.0 * cos(0.5 * x); break;
            case DeltaTerm::Shape::SinhFull: f = 2.0 * sinh(x); break;
            case DeltaTerm::Shape::CosFull:  f = 2.0 * cos(x); break;
            case DeltaTerm::Shape::CoshFull: f = 2.0 * cosh(x); break;
        }
        sum = sum + t.c * inv(sqr(f));
    }
    return sum;
}

Jet2 PotentialSpec::extra_jet(Cx z) const {
    if (!extra_delta || extra_delta->a == 0.0) return Jet2::constant(0.0);
    const Jet2 x = Jet2::variable(z);
    const Jet2 arg = 0.5 * (x - Cx(extra_delta->x0, 0.0));
    if (extra_delta->kind == ExtraDelta::Kind::SinhHalf) return extra_delta->a * inv(sqr(sinh(arg)));
    return extra_delta->a * inv(sqr(sin(arg)));
}

Jet2 PotentialSpec::q_tilde_jet(Cx x, double E) const {
    const double il2 = 1.0 / (lambda * lambda);
    Jet2 q = potential_jet(x) + il2 * delta_jet(x) + extra_jet(x);
    q.f -= E;
    return q;
}

Cx PotentialSpec::q_tilde(Cx x, double E) const {
    if (pole_distance(x) < kPoleGuard) fail(Errc::PoleHit, "evaluation within pole_guard of a pole");
    return q_tilde_unguarded(x, E);
}

Cx PotentialSpec::q_tilde_unguarded(Cx x, double E) const {
    const double il2 = 1.0 / (lambda * lambda);
    Cx v = potential_jet(x).f + il2 * delta_jet(x).f + extra_jet(x).f;
    return v - E;
}

namespace {

// Pole lattices (base points within the basic strip; the periodic copies follow
// from the family period).
struct PoleLattice {
    std::vector<std::pair<Cx, int>> base; // location, order (of q~)
};

PoleLattice pole_lattice(const PotentialSpec& s) {
    PoleLattice L;
    const Cx I(0.0, 1.0);
    switch (s.family) {
        case Family::Harmonic:
        case Family::Morse:
        case Family::ExpWell:
        case Family::CubicExp:
        case Family::ExpWell2:
            break;
        case Family::Coulomb:
        case Family::RadialHarmonic:
            L.base.push_back({Cx(0.0, 0.0), 2});
            break;
        case Family::InvQuartic:
            L.base.push_back({Cx(0.0, 0.0), 4});
            break;
        case Family::Eckart:
            L.base.push_back({I * kPi, 2});
            break;
        case Family::SinhWell:
            L.base.push_back({Cx(0.0, 0.0), 2});
            break;
        case Family::PoschlTeller:
            L.base.push_back({Cx(0.0, 0.0), 2});
            L.base.push_back({I * kPi, 2});
            break;
        case Family::TrigWell:
            L.base.push_back({Cx(kPi, 0.0), 2});
            break;
        case Family::TrigBox:
            L.base.push_back({Cx(0.0, 0.0), 2});
            L.base.push_back({Cx(kPi, 0.0), 2});
            break;
        case Family::ScarfTrig:
            L.base.push_back({Cx(0.5 * kPi, 0.0), 2});
            L.base.push_back({Cx(-0.5 * kPi, 0.0), 2});
            break;
        case Family::ScarfHyp:
            L.base.push_back({I * (0.5 * kPi), 2});
            L.base.push_back({-I * (0.5 * kPi), 2});
            break;
        case Family::CoshPoleWell: {
            const double p = s.param("a");
            L.base.push_back({I * p, 1});
            L.base.push_back({-I * p, 1});
            break;
        }
        case Family::SinhPoleWell:
            L.base.push_back({Cx(0.0, 0.0), 2});
            L.base.push_back({I * kPi, 2});
            break;
    }
    if (s.extra_delta && s.extra_delta->a != 0.0) {
        if (s.extra_delta->kind == ExtraDelta::Kind::SinhHalf)
            L.base.push_back({Cx(s.extra_delta->x0, 0.0), 2});
        else
            L.base.push_back({Cx(s.extra_delta->x0, 0.0), 2});
    }
    return L;
}

double reduced_distance(Cx d, PeriodAxis period) {
    if (period == PeriodAxis::Imag2Pi) {
        double im = std::remainder(d.imag(), 2.0 * kPi);
        return std::hypot(d.real(), im);
    }
    if (period == PeriodAxis::Real2Pi) {
        double re = std::remainder(d.real(), 2.0 * kPi);
        return std::hypot(re, d.imag());
    }
    return std::abs(d);
}

} // namespace

double PotentialSpec::pole_distance(Cx x) const {
    const PoleLattice L = pole_lattice(*this);
    double best = kInf;
    for (const auto& [p, order] : L.base) best = std::min(best, reduced_distance(x - p, period));
    return best;
}

Region PotentialSpec::basic_strip(double E) const {
    // Horizontal extent covers the turning points with margin.
    double lo = -3.0, hi = 3.0;
    if (has_two_real_turning_points(*this, E)) {
        auto [xm, xp] = real_turning_pair(*this, E);
        lo = xm;
        hi = xp;
    }
    const double margin = 3.0;
    switch (period) {
        case PeriodAxis::Imag2Pi:
            return {lo - margin, hi + margin, -kPi, kPi};
        case PeriodAxis::Real2Pi:
            // One real period; imaginary extent comparable to the strip width.
            return {-kPi, kPi, -kPi, kPi};
        case PeriodAxis::None: {
            double w = std::max(hi - lo, 2.0) + margin;
            double c = 0.5 * (lo + hi);
            if (domain.lo_kind != EndpointKind::Infinity) {
                // Half-line families: keep the rectangle to the right of the origin pole.
                return {std::max(1e-6, lo - margin * 0.0), hi + w, -w, w};
            }
            return {c - w, c + w, -w, w};
        }
    }
    return {lo - margin, hi + margin, -kPi, kPi};
}

PotentialSpec make_potential(Family family, const std::map<std::string, double>& params, double lambda,
                             std::optional<ExtraDelta> extra) {
    PotentialSpec s;
    s.family = family;
    s.params = params;
    s.lambda = lambda;
    s.extra_delta = extra;
    require(lambda > 0, "lambda > 0");
    for (const auto& k : info(family).param_keys)
        if (!params.count(k)) fail(Errc::BadConfig, std::string("missing param '") + k + "'");

    auto p = [&](const char* k) { return params.at(k); };
    const Cx I(0.0, 1.0);
    switch (family) {
        case Family::Harmonic:
            require(p("alpha") > 0, "alpha > 0");
            s.domain = {-kInf, kInf, EndpointKind::Infinity, EndpointKind::Infinity};
            s.period = PeriodAxis::None;
            break;
        case Family::Morse:
            require(p("alpha") > 0, "alpha > 0");
            require(p("beta") > 0, "beta > 0");
            s.domain = {-kInf, kInf, EndpointKind::Infinity, EndpointKind::Infinity};
            s.period = PeriodAxis::Imag2Pi;
            break;
        case Family::ExpWell:
            require(p("alpha") > 0, "alpha > 0");
            require(p("gamma") > 0, "gamma > 0");
            s.domain = {-kInf, kInf, EndpointKind::Infinity, EndpointKind::Infinity};
            s.period = PeriodAxis::Imag2Pi;
            break;
        case Family::CubicExp:
        case Family::ExpWell2:
            require(p("alpha") > 0, "alpha > 0");
            require(p("beta_plus") > p("beta_minus"), "beta_plus > beta_minus");
            require(p("beta_minus") > 0, "beta_minus > 0");
            require(p("gamma") > 0, "gamma > 0");
            s.domain = {-kInf, kInf, EndpointKind::Infinity, EndpointKind::Infinity};
            s.period = PeriodAxis::Imag2Pi;
            break;
        case Family::Coulomb:
            require(p("alpha") > 0, "alpha > 0");
            require(p("beta") >= 0, "beta >= 0");
            s.domain = {0.0, kInf, EndpointKind::SecondOrderPole, EndpointKind::Infinity};
            s.period = PeriodAxis::None;
            s.langer_delta.push_back({DeltaTerm::Shape::InvX, 1.0});
            break;
        case Family::RadialHarmonic:
            require(p("alpha") > 0, "alpha > 0");
            require(p("beta") >= 0, "beta >= 0");
            s.domain = {0.0, kInf, EndpointKind::SecondOrderPole, EndpointKind::Infinity};
            s.period = PeriodAxis::None;
            s.langer_delta.push_back({DeltaTerm::Shape::InvX, 1.0});
            break;
        case Family::InvQuartic:
            require(p("alpha") > 0, "alpha > 0");
            require(p("beta") > 0, "beta > 0");
            s.domain = {0.0, kInf, EndpointKind::HigherPole, EndpointKind::Infinity};
            s.period = PeriodAxis::None;
            break;
        case Family::Eckart:
            require(p("beta") > 0, "beta > 0");
            require(2.0 * p("alpha") > -p("beta"), "2 alpha > -beta");
            s.domain = {-kInf, kInf, EndpointKind::Infinity, EndpointKind::Infinity};
            s.period = PeriodAxis::Imag2Pi;
            s.langer_delta.push_back({DeltaTerm::Shape::CoshHalf, -0.25});
            break;
        case Family::SinhWell:
            require(p("beta") > 0, "beta > 0");
            require(p("alpha") + p("beta") > 0, "alpha + beta > 0");
            require(2.0 * p("alpha") + p("beta") < 0, "2 alpha + beta < 0");
            s.domain = {0.0, kInf, EndpointKind::SecondOrderPole, EndpointKind::Infinity};
            s.period = PeriodAxis::Imag2Pi;
            s.langer_delta.push_back({DeltaTerm::Shape::SinhHalf, 0.25});
            break;
        case Family::PoschlTeller:
            require(p("beta") > 0, "beta > 0");
            require(p("beta_prime") > 0, "beta_prime > 0");
            s.domain = {0.0, kInf, EndpointKind::SecondOrderPole, EndpointKind::Infinity};
            s.period = PeriodAxis::Imag2Pi;
            s.langer_delta.push_back({DeltaTerm::Shape::SinhHalf, 0.25});
            s.langer_delta.push_back({DeltaTerm::Shape::CoshHalf, -0.25});
            break;
        case Family::TrigWell:
            require(p("alpha") > 0, "alpha > 0");
            s.domain = {-kPi, kPi, EndpointKind::SecondOrderPole, EndpointKind::SecondOrderPole};
            s.period = PeriodAxis::Real2Pi;
            s.langer_delta.push_back({DeltaTerm::Shape::CosHalf, 0.25});
            break;
        case Family::TrigBox:
            require(p("alpha") > 0, "alpha > 0");
            require(p("beta") > 0, "beta > 0");
            s.domain = {0.0, kPi, EndpointKind::SecondOrderPole, EndpointKind::SecondOrderPole};
            s.period = PeriodAxis::Real2Pi;
            s.langer_delta.push_back({DeltaTerm::Shape::CosHalf, 0.25});
            s.langer_delta.push_back({DeltaTerm::Shape::SinHalf, 0.25});
            break;
        case Family::ScarfTrig:
            require(p("alpha") > p("beta"), "alpha > beta");
            require(p("beta") > 0, "beta > 0");
            s.domain = {-0.5 * kPi, 0.5 * kPi, EndpointKind::SecondOrderPole, EndpointKind::SecondOrderPole};
            s.period = PeriodAxis::Real2Pi;
            s.langer_delta.push_back({DeltaTerm::Shape::CosFull, 1.0});
            break;
        case Family::ScarfHyp:
            require(p("beta") > 0, "beta > 0");
            s.domain = {-kInf, kInf, EndpointKind::Infinity, EndpointKind::Infinity};
            s.period = PeriodAxis::Imag2Pi;
            s.langer_delta.push_back({DeltaTerm::Shape::CoshFull, -1.0});
            break;
        case Family::CoshPoleWell:
            require(p("alpha") > 0, "alpha > 0");
            require(p("beta") < 0, "beta < 0");
            require(p("a") > 0 && p("a") < kPi, "0 < a < pi");
            s.domain = {-kInf, kInf, EndpointKind::Infinity, EndpointKind::Infinity};
            s.period = PeriodAxis::Imag2Pi;
            // Simple poles of V stay simple in q~; no Langer term is attached here.
            break;
        case Family::SinhPoleWell:
            require(p("alpha") > 0, "alpha > 0");
            require(p("beta") < 0, "beta < 0");
            require(p("alpha") + p("beta") > 0, "alpha + beta > 0");
            s.domain = {0.0, kInf, EndpointKind::SecondOrderPole, EndpointKind::Infinity};
            s.period = PeriodAxis::Imag2Pi;
            s.langer_delta.push_back({DeltaTerm::Shape::SinhFull, 1.0});
            break;
    }
    if (extra && extra->a != 0.0) {
        const bool trig = (s.period == PeriodAxis::Real2Pi);
        const bool kind_trig = (extra->kind == ExtraDelta::Kind::SinHalf);
        if (trig != kind_trig) fail(Errc::ParamOutOfRange, "extra_delta kind incompatible with family period");
    }
    return s;
}

// ---------------------------------------------------------------------------
// Turning points.
// ---------------------------------------------------------------------------

namespace {

// All x in the strip with exp(x) == u (one representative per 2*pi*i period).
void push_exp_roots(std::vector<Cx>& out, Cx u) {
    if (std::abs(u) == 0.0) return;
    out.push_back(std::log(u)); // principal branch lands in the basic strip
}

// sinh(x/2)^2 == s  ->  x = +-2 asinh(sqrt(s)) (mod 2 pi i).
void push_sinh_half_sq_roots(std::vector<Cx>& out, Cx s) {
    const Cx w = std::sqrt(s);
    const Cx r = 2.0 * std::asinh(w);
    out.push_back(r);
    out.push_back(-r);
}

void push_sin_half_sq_roots(std::vector<Cx>& out, Cx s) {
    const Cx w = std::sqrt(s);
    const Cx r = 2.0 * std::asin(w);
    out.push_back(r);
    out.push_back(-r);
}

void push_cos_half_sq_roots(std::vector<Cx>& out, Cx c2) {
    const Cx w = std::sqrt(c2);
    const Cx r = 2.0 * std::acos(w);
    out.push_back(r);
    out.push_back(-r);
}

// Generic fallback: Newton iteration seeded on a grid over the region.
std::vector<Cx> newton_roots(const PotentialSpec& spec, double E, const Region& R) {
    std::vector<Cx> roots;
    const int nx = 81, ny = 41;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            Cx x(R.re_lo + (R.re_hi - R.re_lo) * (ix + 0.5) / nx,
                 R.im_lo + (R.im_hi - R.im_lo) * (iy + 0.5) / ny);
            if (spec.pole_distance(x) < 1e-3) continue;
            bool stalled = false;
            for (int it = 0; it < 60; ++it) {
                Jet2 q = spec.q_tilde_jet(x, E);
                if (std::abs(q.f1) == 0.0) { stalled = true; break; }
                Cx step = q.f / q.f1;
                if (std::abs(step) > 1.0) step *= 1.0 / std::abs(step);
                x -= step;
                if (spec.pole_distance(x) < 1e-6) { stalled = true; break; }
                if (std::abs(step) < 1e-13) break;
            }
            if (stalled || !R.contains(x, 1e-6)) continue;
            if (std::abs(spec.q_tilde_unguarded(x, E)) > 1e-8 * (1.0 + std::abs(E))) continue;
            bool dup = false;
            for (const auto& r : roots)
                if (std::abs(r - x) < 1e-7) dup = true;
            if (!dup) roots.push_back(x);
        }
    }
    return roots;
}

std::vector<Cx> analytic_roots(const PotentialSpec& spec, double E) {
    std::vector<Cx> out;
    auto P = [&](const char* k) { return spec.param(k); };
    const double il2 = 1.0 / (spec.lambda * spec.lambda);
    switch (spec.family) {
        case Family::Harmonic: {
            const double a = P("alpha");
            const Cx r = std::sqrt(Cx(E, 0.0)) / a;
            out.push_back(r);
            out.push_back(-r);
            break;
        }
        case Family::Morse: {
            const double a = P("alpha"), b = P("beta");
            for (Cx u : solve_quadratic(a * a, -2.0 * b, -E)) push_exp_roots(out, u);
            break;
        }
        case Family::ExpWell: {
            const double a = P("alpha"), g = P("gamma");
            for (Cx u : solve_quadratic(a, -E, g)) push_exp_roots(out, u);
            break;
        }
        case Family::CubicExp: {
            const double a = P("alpha"), bp = P("beta_plus"), bm = P("beta_minus"), g = P("gamma");
            const double s = bp + bm, pr = bp * bm;
            auto rts = solve_cubic_monic(g - s, pr - s * g, pr * g - E / a);
            for (Cx u : rts) push_exp_roots(out, u);
            break;
        }
        case Family::ExpWell2: {
            const double a = P("alpha"), bp = P("beta_plus"), bm = P("beta_minus"), g = P("gamma");
            const double s = bp + bm, pr = bp * bm;
            // a g u^3 + a(1-s g) u^2 + (a(pr g - s) - E) u + a pr = 0
            const double c3 = a * g, c2 = a * (1.0 - s * g), c1 = a * (pr * g - s) - E, c0 = a * pr;
            auto rts = solve_cubic_monic(c2 / c3, c1 / c3, c0 / c3);
            for (Cx u : rts) push_exp_roots(out, u);
            break;
        }
        case Family::Coulomb: {
            const double a = P("alpha"), bh = P("beta") + 0.25 * il2;
            if (E == 0.0) {
                out.push_back(Cx(bh / a, 0.0));
            } else {
                for (Cx r : solve_quadratic(E, a, -bh)) out.push_back(r);
            }
            break;
        }
        case Family::RadialHarmonic: {
            const double a = P("alpha"), bh = P("beta") + 0.25 * il2;
            for (Cx x2 : solve_quadratic(a * a, -E, bh)) {
                const Cx r = std::sqrt(x2);
                out.push_back(r);
                out.push_back(-r);
            }
            break;
        }
        case Family::InvQuartic: {
            const double A = P("alpha"), B = P("beta");
            for (Cx x2 : solve_quadratic(-E, -B, A)) {
                const Cx r = std::sqrt(x2);
                out.push_back(r);
                out.push_back(-r);
            }
            break;
        }
        case Family::Eckart: {
            const double a = P("alpha"), bh = P("beta") + il2 / 16.0;
            for (Cx u : solve_quadratic(4.0 * a - E, -(4.0 * bh + 2.0 * E), -E)) push_exp_roots(out, u);
            break;
        }
        case Family::SinhWell: {
            const double a = P("alpha"), bh = P("beta") + il2 / 16.0;
            for (Cx u : solve_quadratic(4.0 * a - E, 4.0 * bh + 2.0 * E, -E)) push_exp_roots(out, u);
            break;
        }
        case Family::PoschlTeller: {
            const double bh = P("beta") + il2 / 16.0, bph = P("beta_prime") + il2 / 16.0;
            for (Cx s : solve_quadratic(E, E + bph - bh, -bh)) push_sinh_half_sq_roots(out, s);
            break;
        }
        case Family::TrigWell: {
            const double ah = P("alpha") + il2 / 16.0;
            if (E != 0.0) push_cos_half_sq_roots(out, Cx(ah / E, 0.0));
            break;
        }
        case Family::TrigBox: {
            const double ah = P("alpha") + il2 / 16.0, bh = P("beta") + il2 / 16.0;
            for (Cx s : solve_quadratic(E, ah - bh - E, bh)) push_sin_half_sq_roots(out, s);
            break;
        }
        case Family::ScarfTrig: {
            const double ah = P("alpha") + 0.25 * il2, b = P("beta");
            for (Cx s : solve_quadratic(E, b, ah - E)) {
                const Cx r = std::asin(s);
                out.push_back(r);
                Cx r2 = kPi - r;
                if (r2.real() > kPi) r2 -= 2.0 * kPi;
                out.push_back(r2);
            }
            break;
        }
        case Family::ScarfHyp: {
            const double ah = P("alpha") - 0.25 * il2, b = P("beta");
            for (Cx s : solve_quadratic(E, -b, E - ah)) {
                const Cx r = std::asinh(s);
                out.push_back(r);
                Cx r2 = Cx(0.0, kPi) - r;
                if (r2.imag() > kPi) r2 -= Cx(0.0, 2.0 * kPi);
                out.push_back(r2);
            }
            break;
        }
        case Family::CoshPoleWell: {
            const double a = P("alpha"), b = P("beta"), C = std::cos(P("a"));
            for (Cx u : solve_quadratic(2.0 * a - E, 2.0 * b + 2.0 * E * C, -E)) push_exp_roots(out, u);
            break;
        }
        case Family::SinhPoleWell:
            return {}; // quartic; handled by the Newton fallback
    }
    return out;
}

} // namespace

std::vector<CriticalPoint> find_turning_points(const PotentialSpec& spec, double E, const Region& region) {
    std::vector<Cx> roots;
    const bool generic = (spec.extra_delta && spec.extra_delta->a != 0.0) ||
                         spec.family == Family::SinhPoleWell;
    if (generic) {
        roots = newton_roots(spec, E, region);
    } else {
        std::vector<Cx> base = analytic_roots(spec, E);
        // Periodic copies into the requested region.
        for (Cx r : base) {
            if (spec.period == PeriodAxis::Imag2Pi) {
                const double period = 2.0 * kPi;
                int k_lo = (int)std::ceil((region.im_lo - r.imag()) / period - 0.25);
                int k_hi = (int)std::floor((region.im_hi - r.imag()) / period + 0.25);
                for (int k = k_lo; k <= k_hi; ++k) {
                    Cx c = r + Cx(0.0, period * k);
                    if (region.contains(c)) roots.push_back(c);
                }
            } else if (spec.period == PeriodAxis::Real2Pi) {
                const double period = 2.0 * kPi;
                int k_lo = (int)std::ceil((region.re_lo - r.real()) / period - 0.25);
                int k_hi = (int)std::floor((region.re_hi - r.real()) / period + 0.25);
                for (int k = k_lo; k <= k_hi; ++k) {
                    Cx c = r + Cx(period * k, 0.0);
                    if (region.contains(c)) roots.push_back(c);
                }
            } else if (region.contains(r)) {
                roots.push_back(r);
            }
        }
    }

    // Degeneracy check on the raw roots: anything closer than the merge
    // tolerance but distinct must be perturbed away by the caller.
    std::sort(roots.begin(), roots.end(), [](Cx a, Cx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    for (size_t i = 0; i + 1 < roots.size(); ++i) {
        const double d = std::abs(roots[i + 1] - roots[i]);
        if (d > 1e-12 && d < kRootMergeTol) fail(Errc::DegenerateRoot, "two roots within root_merge_tol");
    }
    if (!generic) {
        // Polish analytically found roots with a few Newton steps for tightness.
        for (auto& r : roots) {
            for (int it = 0; it < 3; ++it) {
                Jet2 q = spec.q_tilde_jet(r, E);
                if (std::abs(q.f1) == 0.0) break;
                r -= q.f / q.f1;
            }
        }
        std::sort(roots.begin(), roots.end(), [](Cx a, Cx b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
    }
    std::vector<Cx> uniq;
    for (Cx r : roots) {
        if (!uniq.empty() && std::abs(r - uniq.back()) < 1e-10) continue;
        uniq.push_back(r);
    }

    std::vector<CriticalPoint> out;
    for (Cx r : uniq) {
        CriticalPoint cp;
        cp.location = r;
        cp.kind = CritKind::TurningPoint;
        if (spec.period == PeriodAxis::Imag2Pi)
            cp.strip_index = (int)std::lround(r.imag() / (2.0 * kPi));
        else if (spec.period == PeriodAxis::Real2Pi)
            cp.strip_index = (int)std::lround(r.real() / (2.0 * kPi));
        out.push_back(cp);
    }

    // Flag the two real turning points bounding the classically allowed region.
    std::vector<size_t> real_idx;
    for (size_t i = 0; i < out.size(); ++i)
        if (std::abs(out[i].location.imag()) < 1e-9 && out[i].location.real() > spec.domain.lo &&
            out[i].location.real() < spec.domain.hi)
            real_idx.push_back(i);
    for (size_t a = 0; a + 1 < real_idx.size(); ++a) {
        const double xm = out[real_idx[a]].location.real(), xp = out[real_idx[a + 1]].location.real();
        const double mid = 0.5 * (xm + xp);
        if (std::real(spec.q_tilde_unguarded(Cx(mid, 0.0), E)) < 0) {
            out[real_idx[a]].real_pair = true;
            out[real_idx[a + 1]].real_pair = true;
        }
    }
    return out;
}

std::vector<CriticalPoint> find_turning_points(const PotentialSpec& spec, double E) {
    return find_turning_points(spec, E, spec.basic_strip(E));
}

namespace {

// Real simple roots of q~ within the open domain, via the analytic root maps
// when available, otherwise an adaptive sign scan.
std::vector<double> real_roots_in_domain(const PotentialSpec& spec, double E) {
    const bool generic = (spec.extra_delta && spec.extra_delta->a != 0.0) ||
                         spec.family == Family::SinhPoleWell;
    std::vector<double> roots;
    auto q = [&](double x) { return std::real(spec.q_tilde_unguarded(Cx(x, 0.0), E)); };
    if (!generic) {
        for (Cx r : analytic_roots(spec, E)) {
            if (std::abs(r.imag()) > 1e-9 * (1.0 + std::abs(r.real()))) continue;
            double x = r.real();
            if (!(x > spec.domain.lo && x < spec.domain.hi)) continue;
            for (int it = 0; it < 3; ++it) {
                const Jet2 j = spec.q_tilde_jet(Cx(x, 0.0), E);
                const double d = std::real(j.f1);
                if (d == 0.0) break;
                x -= std::real(j.f) / d;
            }
            roots.push_back(x);
        }
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end(),
                                [](double a, double b) { return std::abs(a - b) < 1e-10; }),
                    roots.end());
        return roots;
    }
    double lo = spec.domain.lo, hi = spec.domain.hi;
    if (!std::isfinite(lo)) lo = -60.0;
    if (!std::isfinite(hi)) hi = 60.0;
    if (spec.domain.lo_kind != EndpointKind::Infinity) lo += 1e-6;
    if (spec.domain.hi_kind != EndpointKind::Infinity) hi -= 1e-6;
    const int n = 8000;
    double xp = lo, fp = q(lo);
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double f = q(x);
        if ((fp < 0) != (f < 0)) roots.push_back(bisect(q, xp, x, fp, 200));
        xp = x;
        fp = f;
    }
    return roots;
}

} // namespace

bool has_two_real_turning_points(const PotentialSpec& spec, double E) {
    std::vector<double> roots = real_roots_in_domain(spec, E);
    if (roots.size() != 2) return false;
    return std::real(spec.q_tilde_unguarded(Cx(0.5 * (roots[0] + roots[1]), 0.0), E)) < 0;
}

std::pair<double, double> real_turning_pair(const PotentialSpec& spec, double E) {
    std::vector<double> roots = real_roots_in_domain(spec, E);
    if (roots.size() != 2) fail(Errc::NoBoundWindow, "expected exactly two real turning points");
    if (std::real(spec.q_tilde_unguarded(Cx(0.5 * (roots[0] + roots[1]), 0.0), E)) >= 0)
        fail(Errc::NoBoundWindow, "q~ not negative between turning points");
    return {roots[0], roots[1]};
}

std::vector<CriticalPoint> classify_singularities(const PotentialSpec& spec) {
    std::vector<CriticalPoint> out;
    const PoleLattice L = pole_lattice(spec);
    for (const auto& [p, order] : L.base) {
        CriticalPoint cp;
        cp.location = p;
        cp.order = order;
        cp.kind = order == 1 ? CritKind::SimplePole : (order == 2 ? CritKind::DoublePole : CritKind::HigherPole);
        cp.strip_index = 0;
        out.push_back(cp);
        // A pole sitting on the strip edge also appears as its mirror copy from
        // the neighbouring strip (the figures' +-i pi / +-pi pairs).
        if (spec.period == PeriodAxis::Imag2Pi && std::abs(p.imag() - kPi) < 1e-12) {
            CriticalPoint cc = cp;
            cc.location = std::conj(p);
            cc.strip_index = -1;
            out.push_back(cc);
        } else if (spec.period == PeriodAxis::Real2Pi && std::abs(p.real() - kPi) < 1e-12) {
            CriticalPoint cc = cp;
            cc.location = -p;
            cc.strip_index = -1;
            out.push_back(cc);
        }
    }
    auto add_inf = [&](double where) {
        CriticalPoint cp;
        cp.location = Cx(where, 0.0);
        cp.kind = CritKind::InfinityPoint;
        out.push_back(cp);
    };
    add_inf(spec.domain.lo);
    add_inf(spec.domain.hi);
    std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    return out;
}

bool tail_limit(const std::function<double(double)>& f, bool upper, double* limit) {
    const double sgn = upper ? 1.0 : -1.0;
    const double d1 = 16.0, d2 = 24.0, d3 = 32.0, d4 = 40.0;
    const double v1 = f(sgn * d1), v2 = f(sgn * d2), v3 = f(sgn * d3), v4 = f(sgn * d4);
    for (double v : {v1, v2, v3, v4})
        if (!std::isfinite(v) || std::abs(v) > 1e8) return false;
    if (std::abs(v4 - v1) <= 1e-9 * (1.0 + std::abs(v4))) {
        *limit = v4;
        return true;
    }
    // A finite limit exists when the probe differences keep shrinking.
    const double g1 = v2 - v1, g2 = v3 - v2, g3 = v4 - v3;
    if (!(std::abs(g3) < std::abs(g2) && std::abs(g2) < std::abs(g1))) return false;
    const double r = g3 / g2;
    if (std::abs(r) <= 0.6) {
        // Exponential-type tail: geometric extrapolation of the remainder.
        *limit = v4 + g3 * r / (1.0 - r);
        return true;
    }
    // Algebraic tail: fit a + b/u + c/u^2 and take the constant.
    const double u1 = 1.0 / d1, u2 = 1.0 / d2, u3 = 1.0 / d3;
    const double det = (u2 - u1) * (u3 - u1) * (u3 - u2);
    const double cc = ((v3 - v1) * (u2 - u1) - (v2 - v1) * (u3 - u1)) / det;
    const double bb = (v2 - v1) / (u2 - u1) - cc * (u2 + u1);
    *limit = v1 - bb * u1 - cc * u1 * u1;
    return true;
}

BoundWindow bound_window(const PotentialSpec& spec) {
    double lo = spec.domain.lo, hi = spec.domain.hi;
    const double far = 35.0;
    if (!std::isfinite(lo)) lo = -far;
    if (!std::isfinite(hi)) hi = far;
    if (spec.domain.lo_kind != EndpointKind::Infinity) lo += 1e-5;
    if (spec.domain.hi_kind != EndpointKind::Infinity) hi -= 1e-5;
    auto q0 = [&](double x) { return std::real(spec.q_tilde_unguarded(Cx(x, 0.0), 0.0)); };

    // Interior minimum.
    const int n = 6000;
    double best = kInf, bx = lo;
    for (int i = 1; i < n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double v = q0(x);
        if (v < best) {
            best = v;
            bx = x;
        }
    }
    const double h = (hi - lo) / n;
    const double xm = golden_min(q0, std::max(lo, bx - h), std::min(hi, bx + h));
    const double e_lo = std::min(best, q0(xm));

    // Upper edge: smaller of the endpoint limits; hard walls leave it open.
    double e_hi = kInf;
    bool open = true;
    if (!std::isfinite(spec.domain.lo)) {
        double lim;
        if (tail_limit(q0, false, &lim)) {
            e_hi = std::min(e_hi, lim);
            open = false;
        }
    }
    if (!std::isfinite(spec.domain.hi)) {
        double lim;
        if (tail_limit(q0, true, &lim)) {
            e_hi = std::min(e_hi, lim);
            open = false;
        }
    }
    if (open) e_hi = kInf;
    if (!(e_lo < e_hi)) fail(Errc::NoBoundWindow, "empty bound window");
    return {e_lo, e_hi, open};
}

PotentialSpec langer_transform(const PotentialSpec& spec, LangerMap map, std::optional<double> E_ref_opt) {
    const double l2 = spec.lambda * spec.lambda;
    if (spec.family == Family::Morse) {
        const double a = spec.param("alpha"), b = spec.param("beta");
        const double window_lo = -b * b / (a * a);
        const double E_ref = E_ref_opt.value_or(0.5 * window_lo);
        if (!(E_ref < 0) || E_ref <= window_lo)
            fail(Errc::ParamOutOfRange, "E_ref must lie in the bound window");
        if (map == LangerMap::ExpHalf) {
            const double beta_new = -4.0 * E_ref - 0.5 / l2;
            if (beta_new < 0) fail(Errc::ParamOutOfRange, "E_ref too shallow for e^{x/2} -> x");
            return make_potential(Family::RadialHarmonic, {{"alpha", 2.0 * a}, {"beta", beta_new}},
                                  spec.lambda);
        }
        const double beta_new = -E_ref - 0.5 / l2;
        if (beta_new < 0) fail(Errc::ParamOutOfRange, "E_ref too shallow for e^x -> x");
        return make_potential(Family::Coulomb, {{"alpha", 2.0 * b}, {"beta", beta_new}}, spec.lambda);
    }
    if (spec.family == Family::ExpWell) {
        if (map != LangerMap::ExpHalf) fail(Errc::UnsupportedMap, "exp-well admits only e^{x/2} -> x");
        const double a = spec.param("alpha"), g = spec.param("gamma");
        const double E_ref = E_ref_opt.value_or(4.0 * std::sqrt(a * g));
        if (E_ref <= 2.0 * std::sqrt(a * g)) fail(Errc::ParamOutOfRange, "E_ref below the bound window");
        const double beta_new = 4.0 * E_ref + 0.25 / l2;
        return make_potential(Family::InvQuartic, {{"alpha", 4.0 * g}, {"beta", beta_new}}, spec.lambda);
    }
    fail(Errc::UnsupportedMap, std::string("langer_transform does not apply to ") + family_name(spec.family));
}

std::string spec_to_json(const PotentialSpec& spec) {
    nlohmann::json j;
    j["family"] = family_name(spec.family);
    j["params"] = spec.params;
    j["lambda"] = spec.lambda;
    if (spec.extra_delta && spec.extra_delta->a != 0.0) {
        j["extra_delta"] = {
            {"kind", spec.extra_delta->kind == ExtraDelta::Kind::SinhHalf ? "sinh-half" : "sin-half"},
            {"a", spec.extra_delta->a},
            {"x0", spec.extra_delta->x0}};
    }
    return j.dump(2);
}

PotentialSpec spec_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::map<std::string, double> params = j.at("params").get<std::map<std::string, double>>();
    std::optional<ExtraDelta> extra;
    if (j.contains("extra_delta")) {
        ExtraDelta e;
        const std::string k = j["extra_delta"].at("kind").get<std::string>();
        e.kind = (k == "sin-half") ? ExtraDelta::Kind::SinHalf : ExtraDelta::Kind::SinhHalf;
        e.a = j["extra_delta"].at("a").get<double>();
        e.x0 = j["extra_delta"].value("x0", 0.0);
        extra = e;
    }
    return make_potential(family_from_name(j.at("family").get<std::string>()), params,
                          j.at("lambda").get<double>(), extra);
}

} // namespace swkb
