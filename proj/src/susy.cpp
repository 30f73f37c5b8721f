#include "swkb/susy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swkb/errors.hpp"
#include "swkb/numeric.hpp"
#include "swkb/quantize.hpp"

namespace swkb {

namespace {

double P(const std::map<std::string, double>& m, const std::string& k) {
    auto it = m.find(k);
    if (it == m.end()) fail(Errc::BadConfig, "missing superpotential param '" + k + "'");
    return it->second;
}

double abs2l1(double l) {
    const double p = std::abs(2.0 * l + 1.0);
    if (p <= 1.0) fail(Errc::ParamOutOfRange, "|2l+1| > 1 required (l > 0 or l < -1)");
    return p;
}

struct CaseSigns {
    double sp = 1.0, sq = 1.0;
};

CaseSigns case_signs(int family, SusyCase c) {
    CaseSigns s;
    switch (c) {
        case SusyCase::Exact1: break;
        case SusyCase::Broken2:
            s.sp = -1.0;
            break;
        case SusyCase::Broken3:
            s.sq = -1.0;
            break;
        case SusyCase::Broken4:
            if (family == 6) {
                s.sq = -1.0; // listing reaches 4deg via the second-sign substitution
            } else {
                s.sp = -1.0;
                s.sq = -1.0;
            }
            break;
    }
    return s;
}

} // namespace

const char* susy_case_name(SusyCase c) {
    switch (c) {
        case SusyCase::Exact1: return "1";
        case SusyCase::Broken2: return "2";
        case SusyCase::Broken3: return "3";
        case SusyCase::Broken4: return "4";
    }
    return "?";
}

const char* shift_name(ShiftClass s) {
    switch (s) {
        case ShiftClass::Shift0: return "SHIFT_0";
        case ShiftClass::ShiftHalf: return "SHIFT_HALF";
        case ShiftClass::ShiftOne: return "SHIFT_ONE";
    }
    return "?";
}

std::vector<SusyCase> catalog_cases(int family) {
    switch (family) {
        case 1:
        case 2:
        case 4:
        case 5:
        case 7:
        case 10: return {SusyCase::Exact1, SusyCase::Broken4};
        case 3:
        case 6:
        case 8:
        case 9:
            return {SusyCase::Exact1, SusyCase::Broken2, SusyCase::Broken3, SusyCase::Broken4};
    }
    fail(Errc::BadConfig, "superpotential family must be 1..10");
}

Jet2 Superpotential::phi_jet(Cx z) const {
    const Jet2 x = Jet2::variable(z);
    const double c0 = coeff[0], c1 = coeff[1];
    switch (family) {
        case 1: return c0 * exp(x) + Jet2::constant(c1);
        case 2: return c0 * inv(x) + Jet2::constant(c1);
        case 3: return c0 * x + c1 * inv(x);
        case 4: return c0 * tanh(0.5 * x) + Jet2::constant(c1);
        case 5: return c0 * (cosh(0.5 * x) / sinh(0.5 * x)) + Jet2::constant(c1);
        case 6: return c0 * tanh(0.5 * x) + c1 * (cosh(0.5 * x) / sinh(0.5 * x));
        case 7: return c0 * tan(0.5 * x);
        case 8: return c0 * tan(0.5 * x) + c1 * (cos(0.5 * x) / sin(0.5 * x));
        case 9: return c0 * tan(x) + c1 * inv(cos(x));
        case 10: return c0 * tanh(x) + c1 * inv(cosh(x));
    }
    fail(Errc::BadConfig, "bad superpotential family");
}

Cx Superpotential::F2_at(Cx x) const { return phi_jet(x).f1; }

Cx Superpotential::F1_at(Cx x) const {
    return phi_jet(x).f1 - partner.delta_jet(x).f / lambda;
}

Cx residue_region_point(const Superpotential& sp, int region, double rho, double theta);

namespace {

// Verify phi^2 - phi'/lambda + eps0 == V on an interior real grid.
void riccati_check(const Superpotential& sp) {
    double lo = sp.partner.domain.lo, hi = sp.partner.domain.hi;
    if (!std::isfinite(lo)) lo = -8.0;
    if (!std::isfinite(hi)) hi = 8.0;
    const double pad = 1e-3 * (hi - lo);
    lo += pad;
    hi -= pad;
    double worst = 0.0, worst_x = lo;
    for (int i = 0; i <= 40; ++i) {
        const double x = lo + (hi - lo) * i / 40.0;
        const Jet2 ph = sp.phi_jet(Cx(x, 0.0));
        const Cx lhs = ph.f * ph.f - ph.f1 / sp.lambda + sp.epsilon0;
        const Cx v = sp.partner.potential_jet(Cx(x, 0.0)).f;
        const double res = std::abs(lhs - v) / (1.0 + std::abs(v));
        if (res > worst) {
            worst = res;
            worst_x = x;
        }
    }
    if (worst > kRiccatiTol) {
        std::ostringstream ss;
        ss << "max deviation " << worst << " at x = " << worst_x;
        fail(Errc::RiccatiMismatch, ss.str());
    }
}

} // namespace

Superpotential superpotential(int family, SusyCase case_tag, const std::map<std::string, double>& params,
                              double lambda) {
    if (lambda <= 0) fail(Errc::ParamOutOfRange, "lambda > 0");
    Superpotential sp;
    sp.family = family;
    sp.catalog_case = case_tag;
    sp.params = params;
    sp.lambda = lambda;
    const CaseSigns sg = case_signs(family, case_tag);
    const auto in_cases = catalog_cases(family);
    if (std::find(in_cases.begin(), in_cases.end(), case_tag) == in_cases.end())
        fail(Errc::ParamOutOfRange, "case not present in the listing for this family");

    switch (family) {
        case 1: {
            const double a = P(params, "alpha"), b = P(params, "beta");
            if (a <= 0 || b <= 0) fail(Errc::ParamOutOfRange, "alpha, beta > 0");
            if (case_tag == SusyCase::Exact1) {
                sp.coeff = {a, -(b / a - 0.5 / lambda), 0, 0};
            } else {
                sp.coeff = {-a, b / a + 0.5 / lambda, 0, 0};
            }
            sp.epsilon0 = -sp.coeff[1] * sp.coeff[1];
            sp.partner = make_potential(Family::Morse, {{"alpha", a}, {"beta", b}}, lambda);
            break;
        }
        case 2: {
            const double a = P(params, "alpha"), l = P(params, "l");
            const double p = sg.sp * abs2l1(l);
            if (a <= 0) fail(Errc::ParamOutOfRange, "alpha > 0");
            sp.coeff = {-(p + 1.0) / (2.0 * lambda), lambda * a / (p + 1.0), 0, 0};
            sp.epsilon0 = -sp.coeff[1] * sp.coeff[1];
            sp.partner = make_potential(Family::Coulomb,
                                        {{"alpha", a}, {"beta", l * (l + 1.0) / (lambda * lambda)}}, lambda);
            break;
        }
        case 3: {
            const double a = P(params, "alpha"), l = P(params, "l");
            const double p = sg.sp * abs2l1(l);
            if (a <= 0) fail(Errc::ParamOutOfRange, "alpha > 0");
            const double c0 = sg.sq * a; // case 3deg flips the oscillator slope
            const double c1 = -(p + 1.0) / (2.0 * lambda);
            sp.coeff = {c0, c1, 0, 0};
            sp.epsilon0 = c0 * (1.0 / lambda - 2.0 * c1);
            sp.partner = make_potential(Family::RadialHarmonic,
                                        {{"alpha", a}, {"beta", l * (l + 1.0) / (lambda * lambda)}}, lambda);
            break;
        }
        case 4: {
            const double a = P(params, "alpha"), l = P(params, "l");
            const double p = sg.sp * abs2l1(l);
            const double T = (p - 1.0) / (4.0 * lambda);
            if (T == 0.0) fail(Errc::ParamOutOfRange, "degenerate tanh coefficient");
            const double K = a / T;
            sp.coeff = {T, K, 0, 0};
            sp.epsilon0 = -(T - K) * (T - K);
            const double ab = abs2l1(l) * abs2l1(l) - 1.0; // p^2-1, case independent
            sp.partner = make_potential(
                Family::Eckart, {{"alpha", a}, {"beta", ab / (16.0 * lambda * lambda) - a}}, lambda);
            break;
        }
        case 5: {
            const double a = P(params, "alpha"), l = P(params, "l");
            const double p = sg.sp * abs2l1(l);
            const double C = -(p + 1.0) / (4.0 * lambda);
            if (C == 0.0) fail(Errc::ParamOutOfRange, "degenerate coth coefficient");
            const double D = a / C;
            sp.coeff = {C, D, 0, 0};
            sp.epsilon0 = -(C - D) * (C - D);
            const double ab = abs2l1(l) * abs2l1(l) - 1.0;
            sp.partner = make_potential(
                Family::SinhWell, {{"alpha", a}, {"beta", ab / (16.0 * lambda * lambda) - a}}, lambda);
            break;
        }
        case 6: {
            const double l = P(params, "l"), lp = P(params, "lp");
            const double p = sg.sp * abs2l1(l), q = sg.sq * abs2l1(lp);
            const double T = (p - 1.0) / (4.0 * lambda);
            const double C = -(q + 1.0) / (4.0 * lambda);
            sp.coeff = {T, C, 0, 0};
            sp.epsilon0 = -(T + C) * (T + C);
            const double p2 = abs2l1(l) * abs2l1(l), q2 = abs2l1(lp) * abs2l1(lp);
            sp.partner = make_potential(Family::PoschlTeller,
                                        {{"beta", (q2 - 1.0) / (16.0 * lambda * lambda)},
                                         {"beta_prime", (p2 - 1.0) / (16.0 * lambda * lambda)}},
                                        lambda);
            break;
        }
        case 7: {
            const double l = P(params, "l");
            const double p = sg.sp * abs2l1(l);
            const double c0 = -(p - 1.0) / (4.0 * lambda);
            sp.coeff = {c0, 0, 0, 0};
            sp.epsilon0 = c0 * c0;
            const double p2 = abs2l1(l) * abs2l1(l);
            sp.partner = make_potential(Family::TrigWell,
                                        {{"alpha", (p2 - 1.0) / (16.0 * lambda * lambda)}}, lambda);
            break;
        }
        case 8: {
            const double l = P(params, "l"), lp = P(params, "lp");
            const double p = sg.sp * abs2l1(l), q = sg.sq * abs2l1(lp);
            const double c0 = (p + 1.0) / (4.0 * lambda);
            const double c1 = -(q + 1.0) / (4.0 * lambda);
            sp.coeff = {c0, c1, 0, 0};
            sp.epsilon0 = (c0 - c1) * (c0 - c1);
            const double p2 = abs2l1(l) * abs2l1(l), q2 = abs2l1(lp) * abs2l1(lp);
            sp.partner = make_potential(Family::TrigBox,
                                        {{"alpha", (p2 - 1.0) / (16.0 * lambda * lambda)},
                                         {"beta", (q2 - 1.0) / (16.0 * lambda * lambda)}},
                                        lambda);
            break;
        }
        case 9: {
            const double l = P(params, "l"), lp = P(params, "lp");
            if (abs2l1(l) <= abs2l1(lp)) fail(Errc::ParamOutOfRange, "|2l+1| > |2l'+1| required");
            const double p = sg.sp * abs2l1(l), q = sg.sq * abs2l1(lp);
            const double A = (p + q + 2.0) / (4.0 * lambda);
            const double B = (p - q) / (4.0 * lambda);
            sp.coeff = {A, B, 0, 0};
            sp.epsilon0 = A * A;
            const double p2 = abs2l1(l) * abs2l1(l), q2 = abs2l1(lp) * abs2l1(lp);
            sp.partner = make_potential(Family::ScarfTrig,
                                        {{"alpha", (p2 + q2 - 2.0) / (8.0 * lambda * lambda)},
                                         {"beta", (p2 - q2) / (8.0 * lambda * lambda)}},
                                        lambda);
            break;
        }
        case 10: {
            const double l = P(params, "l"), b = P(params, "b");
            const double p = sg.sp * abs2l1(l);
            const double A = (p - 1.0) / (2.0 * lambda);
            sp.coeff = {A, b, 0, 0};
            sp.epsilon0 = -A * A;
            const double beta_v = b * (2.0 * A + 1.0 / lambda);
            const double p2 = abs2l1(l) * abs2l1(l);
            sp.partner = make_potential(
                Family::ScarfHyp,
                {{"alpha", b * b - (p2 - 1.0) / (4.0 * lambda * lambda)}, {"beta", beta_v}}, lambda);
            break;
        }
        default: fail(Errc::BadConfig, "superpotential family must be 1..10");
    }
    riccati_check(sp);

    // Leading Laurent data per sheet (three-point Vandermonde fit on a ray).
    const int nregions = residue_region_count(sp);
    for (int r = 0; r < nregions; ++r) {
        auto fit = [&](bool f1) {
            // x-points at radius parameters rho, 2rho, 4rho along theta=0.
            std::array<Cx, 3> ph, fv;
            for (int k = 0; k < 3; ++k) {
                const double rho = 60.0 * std::pow(2.0, k);
                const Cx x = residue_region_point(sp, r, rho, 0.0);
                ph[k] = sp.phi_jet(x).f;
                fv[k] = f1 ? sp.F1_at(x) : sp.F2_at(x);
            }
            // Solve a + b phi + c phi^2 = F at the three samples.
            const Cx p0 = ph[0], p1 = ph[1], p2 = ph[2];
            const Cx d = (p1 - p0) * (p2 - p0) * (p2 - p1);
            const Cx c =
                ((fv[2] - fv[0]) * (p1 - p0) - (fv[1] - fv[0]) * (p2 - p0)) / d;
            const Cx b = (fv[1] - fv[0]) / (p1 - p0) - c * (p1 + p0);
            const Cx a = fv[0] - b * p0 - c * p0 * p0;
            return SheetCoeffs{"region-" + std::to_string(r), a, b, c};
        };
        sp.leading_f1.push_back(fit(true));
        sp.leading_f2.push_back(fit(false));
    }
    return sp;
}

SusyCase classify_susy_case(const Superpotential& sp) {
    const Domain& dom = sp.partner.domain;
    double lo = dom.lo, hi = dom.hi;
    const bool lo_inf = !std::isfinite(lo), hi_inf = !std::isfinite(hi);
    if (lo_inf) lo = -12.0;
    if (hi_inf) hi = 12.0;
    const double xc = 0.5 * (lo + hi);

    auto I = [&](double x) {
        QuadResult r = integrate_adaptive(
            [&](double t) { return Cx(sp.phi(t), 0.0); }, xc, x, 1e-10);
        return sp.lambda * std::real(r.value);
    };

    auto end_vanishes = [&](bool upper) -> int { // 1 vanish, 0 blow, -1 indeterminate
        double x1, x2;
        if (upper) {
            x1 = hi_inf ? 12.0 : hi - 1e-3 * (hi - lo);
            x2 = hi_inf ? 24.0 : hi - 1e-6 * (hi - lo);
        } else {
            x1 = lo_inf ? -12.0 : lo + 1e-3 * (hi - lo);
            x2 = lo_inf ? -24.0 : lo + 1e-6 * (hi - lo);
        }
        const double i1 = I(x1), i2 = I(x2);
        const double margin = 0.05 * (1.0 + std::abs(i1));
        if (i2 > i1 + margin) return 1;  // exp(-lambda int) -> 0
        if (i2 < i1 - margin) return 0;
        return -1;
    };

    const int va = end_vanishes(false), vb = end_vanishes(true);
    if (va < 0 || vb < 0) fail(Errc::Indeterminate, "marginal endpoint behaviour of exp(-lambda int phi)");
    if (va && vb) return SusyCase::Exact1;
    if (va) return SusyCase::Broken2;
    if (vb) return SusyCase::Broken3;
    return SusyCase::Broken4;
}

// ---------------------------------------------------------------------------
// Residues at infinity.
// ---------------------------------------------------------------------------

int residue_region_count(const Superpotential& sp) {
    switch (sp.family) {
        case 1:
        case 2:
        case 4:
        case 5:
        case 7: return 1;
        default: return 2;
    }
}

// Point of region r's contour at radius parameter rho and angle theta.
Cx residue_region_point(const Superpotential& sp, int region, double rho, double theta) {
    const Cx I(0.0, 1.0);
    const double c0 = std::abs(sp.coeff[0]), c1 = std::abs(sp.coeff[1]);
    switch (sp.family) {
        case 1: {
            const double X = std::log((rho + 2.0 * c1 + 2.0) / c0);
            return Cx(X, kPi - theta); // one vertical period segment
        }
        case 2: return (c0 / rho) * std::exp(I * theta);
        case 3:
            if (region == 0) return ((rho + c1 + 1.0) / c0) * std::exp(I * theta);
            return (c1 / rho) * std::exp(I * theta);
        case 4: return I * kPi + (2.0 * c0 / rho) * std::exp(I * theta);
        case 5: return (2.0 * c0 / rho) * std::exp(I * theta);
        case 6:
            if (region == 0) return (2.0 * c1 / rho) * std::exp(I * theta);
            return I * kPi + (2.0 * c0 / rho) * std::exp(I * theta);
        case 7: return Cx(kPi, 0.0) + (2.0 * c0 / rho) * std::exp(I * theta);
        case 8:
            if (region == 0) return (2.0 * c1 / rho) * std::exp(I * theta);
            return Cx(kPi, 0.0) + (2.0 * c0 / rho) * std::exp(I * theta);
        case 9: {
            const double eps = (c0 + c1 + 1.0) / rho;
            const double x0 = (region == 0) ? 0.5 * kPi : -0.5 * kPi;
            return Cx(x0, 0.0) + eps * std::exp(I * theta);
        }
        case 10: {
            const double eps = (c0 + c1 + 1.0) / rho;
            return I * ((region == 0) ? 0.5 * kPi : -0.5 * kPi) + eps * std::exp(I * theta);
        }
    }
    fail(Errc::BadConfig, "bad residue region");
}

namespace {

Cx residue_region_dx(const Superpotential& sp, int region, double rho, double theta) {
    // d x / d theta for the parameterizations above.
    const Cx I(0.0, 1.0);
    if (sp.family == 1) return Cx(0.0, -1.0);
    const Cx p0 = residue_region_point(sp, region, rho, 0.0);
    Cx center;
    switch (sp.family) {
        case 4: center = I * kPi; break;
        case 6: center = (region == 0) ? Cx(0, 0) : I * kPi; break;
        case 7: center = Cx(kPi, 0.0); break;
        case 8: center = (region == 0) ? Cx(0, 0) : Cx(kPi, 0.0); break;
        case 9: center = Cx((region == 0) ? 0.5 * kPi : -0.5 * kPi, 0.0); break;
        case 10: center = I * ((region == 0) ? 0.5 * kPi : -0.5 * kPi); break;
        default: center = Cx(0, 0); break;
    }
    const Cx radial = p0 - center;
    return I * radial * std::exp(I * theta);
}

} // namespace

Cx residue_region_integral(const Superpotential& sp, ResidueVariant v, double Et, int region, double rho,
                           bool zero_F1) {
    const double lam = sp.lambda;
    const double sgn = (v == ResidueVariant::Plus) ? 1.0 : -1.0;

    auto qpm = [&](Cx x) -> Cx { // phi^2 +- phi'/lambda + delta/lambda^2 - Et
        const Jet2 ph = sp.phi_jet(x);
        Cx val = ph.f * ph.f - Et;
        if (!zero_F1) val += sgn * ph.f1 / lam + sp.partner.delta_jet(x).f / (lam * lam);
        return val;
    };
    auto q0 = [&](Cx x) -> Cx {
        const Cx p = sp.phi_jet(x).f;
        return p * p - Et;
    };

    // Winding of phi along the contour; normalized to -1 (clockwise in phi).
    int Nw = 512;
    double wind = 0.0;
    {
        Cx prev = sp.phi_jet(residue_region_point(sp, region, rho, 0.0)).f;
        for (int k = 1; k <= Nw; ++k) {
            const double th = 2.0 * kPi * k / Nw;
            const Cx cur = sp.phi_jet(residue_region_point(sp, region, rho, th)).f;
            wind += std::arg(cur / prev);
            prev = cur;
        }
        wind /= 2.0 * kPi;
    }
    const int w = (int)std::lround(wind);
    if (std::abs(w) != 1) fail(Errc::NotConverged, "contour does not wind the phi infinity once");
    const double orient = (w == -1) ? 1.0 : -1.0; // reverse traversal when phi winds ccw

    auto value_at_N = [&](int N) -> Cx {
        Cx sum(0, 0);
        // Branch-anchored at theta=0: both roots asymptotic to +phi.
        const Cx x0 = residue_region_point(sp, region, rho, 0.0);
        const Cx ph0 = sp.phi_jet(x0).f;
        Cx r1 = ph0 * std::sqrt(qpm(x0) / (ph0 * ph0));
        Cx r2 = ph0 * std::sqrt(q0(x0) / (ph0 * ph0));
        for (int k = 0; k < N; ++k) {
            const double th = 2.0 * kPi * (orient > 0 ? (k + 0.5) / N : 1.0 - (k + 0.5) / N);
            const Cx x = residue_region_point(sp, region, rho, th);
            Cx a = std::sqrt(qpm(x));
            Cx b = std::sqrt(q0(x));
            if (std::abs(a - r1) > std::abs(a + r1)) a = -a;
            if (std::abs(b - r2) > std::abs(b + r2)) b = -b;
            r1 = a;
            r2 = b;
            const Cx dx = orient * residue_region_dx(sp, region, rho, th);
            sum += (a - b) * dx;
        }
        return sum * (2.0 * kPi / N);
    };

    Cx prev = value_at_N(512);
    for (int N = 1024; N <= 32768; N *= 2) {
        const Cx cur = value_at_N(N);
        if (std::abs(cur - prev) < 1e-10 * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

Cx f_residue_at_infinity(const Superpotential& sp, ResidueVariant v, double Et) {
    const int n = residue_region_count(sp);
    auto mean_at = [&](double rho) {
        Cx acc(0, 0);
        for (int r = 0; r < n; ++r) acc += residue_region_integral(sp, v, Et, r, rho);
        return acc / double(n);
    };
    const Cx r20 = mean_at(20.0);
    const Cx r40 = mean_at(40.0);
    if (std::abs(r40 - r20) > kResidueTol)
        fail(Errc::NotConverged, "successive radii disagree beyond residue_tol");
    return r40;
}

SpectrumResult swkb_spectrum(const Superpotential& sp, int m_max) {
    std::ostringstream label;
    label << "phi" << sp.family << "-case" << susy_case_name(sp.catalog_case);
    return swkb_spectrum_fn([&sp](double x) { return sp.phi(x); }, sp.partner.domain.lo,
                            sp.partner.domain.hi, sp.lambda, sp.epsilon0, m_max, label.str());
}

ShiftClass verify_level_shift(const PotentialSpec& spec, const Superpotential& sp, int m_max) {
    if (spec.family != sp.partner.family)
        fail(Errc::BadConfig, "spec and superpotential belong to different families");
    const SpectrumResult sw = swkb_spectrum(sp, m_max);
    const BoundWindow w = bound_window(spec);

    std::vector<double> shifts;
    for (const auto& lv : sw.levels) {
        if (!(lv.E > w.lo + 1e-9) || (std::isfinite(w.hi) && !(lv.E < w.hi - 1e-9))) continue;
        if (!has_two_real_turning_points(spec, lv.E)) continue;
        shifts.push_back(lv.m - wkb_index(spec, lv.E));
    }
    if (shifts.size() < 2) fail(Errc::NoConstantShift, "too few SWKB levels inside the JWKB window");
    double mn = shifts[0], mx = shifts[0], mean = 0;
    for (double s : shifts) {
        mn = std::min(mn, s);
        mx = std::max(mx, s);
        mean += s;
    }
    mean /= shifts.size();
    if (mx - mn > 1e-5) fail(Errc::NoConstantShift, "enumeration offset is not constant across levels");
    for (double target : {0.0, 0.5, 1.0}) {
        if (std::abs(mean - target) < 1e-3) {
            if (target == 0.0) return ShiftClass::Shift0;
            if (target == 0.5) return ShiftClass::ShiftHalf;
            return ShiftClass::ShiftOne;
        }
    }
    fail(Errc::NoConstantShift, "offset is not 0, 1/2 or 1");
}

} // namespace swkb
