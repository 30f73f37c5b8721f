#include <doctest.h>

#include <cmath>
#include <complex>

#include "swkb/errors.hpp"
#include "swkb/numeric.hpp"
#include "swkb/potentials.hpp"
#include "swkb/report.hpp"

using namespace swkb;

namespace {
const Cx I(0.0, 1.0);

PotentialSpec morse11(double lambda = 1.0) {
    return make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 1.0}}, lambda);
}
} // namespace

TEST_CASE("make_potential attaches the standard delta terms") {
    PotentialSpec m = morse11();
    CHECK(m.langer_delta.empty()); // holomorphic family

    PotentialSpec pt = make_potential(Family::PoschlTeller, {{"beta", 1.0}, {"beta_prime", 2.0}}, 1.0);
    REQUIRE(pt.langer_delta.size() == 2);
    CHECK(pt.langer_delta[0].shape == DeltaTerm::Shape::SinhHalf);
    CHECK(pt.langer_delta[0].c == doctest::Approx(0.25));
    CHECK(pt.langer_delta[1].shape == DeltaTerm::Shape::CoshHalf);
    CHECK(pt.langer_delta[1].c == doctest::Approx(-0.25));

    CHECK_THROWS_WITH_AS(make_potential(Family::Morse, {{"alpha", -1.0}, {"beta", 1.0}}, 1.0),
                         doctest::Contains("alpha > 0"), Error);
    CHECK_THROWS_AS(make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 1.0}}, -2.0), Error);
}

TEST_CASE("langer delta behaves like 1/(4(x-z)^2) at every pole it covers") {
    struct Probe {
        Family fam;
        std::map<std::string, double> params;
        std::vector<Cx> poles;
    };
    const std::vector<Probe> probes = {
        {Family::Coulomb, {{"alpha", 1.0}, {"beta", 0.5}}, {Cx(0, 0)}},
        {Family::Eckart, {{"alpha", 0.5}, {"beta", 2.0}}, {I * kPi, -I * kPi}},
        {Family::SinhWell, {{"alpha", -2.0}, {"beta", 3.5}}, {Cx(0, 0)}},
        {Family::PoschlTeller, {{"beta", 1.0}, {"beta_prime", 2.0}}, {Cx(0, 0), I * kPi}},
        {Family::TrigWell, {{"alpha", 1.0}}, {Cx(kPi, 0)}},
        {Family::TrigBox, {{"alpha", 1.0}, {"beta", 1.0}}, {Cx(0, 0), Cx(kPi, 0)}},
        {Family::ScarfTrig, {{"alpha", 2.0}, {"beta", 1.0}}, {Cx(kPi / 2, 0), Cx(-kPi / 2, 0)}},
        {Family::ScarfHyp, {{"alpha", 1.0}, {"beta", 2.0}}, {I * (kPi / 2), -I * (kPi / 2)}},
        {Family::SinhPoleWell, {{"alpha", 1.0}, {"beta", -0.5}}, {Cx(0, 0), I * kPi}},
    };
    for (const auto& pr : probes) {
        CAPTURE(family_name(pr.fam));
        PotentialSpec s = make_potential(pr.fam, pr.params, 1.0);
        for (Cx z : pr.poles) {
            CAPTURE(z.real());
            CAPTURE(z.imag());
            const Cx u(7e-4, 3e-4);
            const Cx c_local = s.delta_jet(z + u).f * u * u;
            CHECK(std::abs(c_local - Cx(0.25, 0.0)) < 2e-3);
        }
    }
}

TEST_CASE("evaluate_q matches direct substitution") {
    PotentialSpec h = make_potential(Family::Harmonic, {{"alpha", 1.0}}, 1.0);
    CHECK(std::abs(h.q_tilde(Cx(0, 0), 1.0) - Cx(-1, 0)) < 1e-14);
    CHECK(std::abs(h.q_tilde(Cx(1, 0), 1.0)) < 1e-14);

    PotentialSpec m = morse11();
    CHECK(std::abs(m.q_tilde(Cx(0, 0), -0.75) - Cx(-0.25, 0)) < 1e-14);

    PotentialSpec c = make_potential(Family::Coulomb, {{"alpha", 1.0}, {"beta", 0.0}}, 1.0);
    CHECK_THROWS_AS(c.q_tilde(Cx(1e-9, 0), -0.1), Error);
}

TEST_CASE("q~ is real on the real domain and periodic across the strip") {
    for (const auto& entry : catalog_reference_entries()) {
        CAPTURE(family_name(entry.family));
        PotentialSpec s = make_potential(entry.family, entry.params, entry.lambda);
        const BoundWindow w = bound_window(s);
        const double E = w.lo + 0.4 * ((std::isfinite(w.hi) ? w.hi : w.lo + 4.0) - w.lo);
        double lo = std::isfinite(s.domain.lo) ? s.domain.lo + 0.2 : -4.0;
        double hi = std::isfinite(s.domain.hi) ? s.domain.hi - 0.2 : 4.0;
        for (int i = 0; i <= 20; ++i) {
            const double x = lo + (hi - lo) * i / 20.0;
            const Cx q = s.q_tilde_unguarded(Cx(x, 0.0), E);
            CHECK(std::abs(q.imag()) <= 1e-12 * (1.0 + std::abs(q)));
        }
        if (s.period == PeriodAxis::None) continue;
        const Cx shift = s.period == PeriodAxis::Imag2Pi ? Cx(0, 2 * kPi) : Cx(2 * kPi, 0);
        for (Cx z : {Cx(0.37, 0.41), Cx(-1.1, 0.2), Cx(0.8, -0.33)}) {
            if (s.pole_distance(z) < 0.1) continue;
            const Cx a = s.q_tilde_unguarded(z, E), b = s.q_tilde_unguarded(z + shift, E);
            CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
        }
    }
}

TEST_CASE("find_turning_points: closed-form cases") {
    PotentialSpec h = make_potential(Family::Harmonic, {{"alpha", 1.0}}, 1.0);
    auto tp = find_turning_points(h, 1.0);
    REQUIRE(tp.size() == 2);
    CHECK(std::abs(tp[0].location - Cx(-1, 0)) < 1e-12);
    CHECK(std::abs(tp[1].location - Cx(1, 0)) < 1e-12);
    CHECK(tp[0].real_pair);
    CHECK(tp[1].real_pair);

    PotentialSpec m = morse11();
    auto tpm = find_turning_points(m, -0.75);
    REQUIRE(tpm.size() == 2);
    CHECK(std::abs(tpm[0].location - Cx(std::log(0.5), 0)) < 1e-12);
    CHECK(std::abs(tpm[1].location - Cx(std::log(1.5), 0)) < 1e-12);

    PotentialSpec ew = make_potential(Family::ExpWell, {{"alpha", 1.0}, {"gamma", 1.0}}, 1.0);
    auto tpe = find_turning_points(ew, 2.5); // E = 2 beta with beta = 1.25
    REQUIRE(tpe.size() == 2);
    CHECK(std::abs(tpe[0].location - Cx(std::log(0.5), 0)) < 1e-12);
    CHECK(std::abs(tpe[1].location - Cx(std::log(2.0), 0)) < 1e-12);
}

TEST_CASE("turning point residuals stay below root_tol for the whole catalog") {
    for (const auto& entry : catalog_reference_entries()) {
        CAPTURE(family_name(entry.family));
        PotentialSpec s = make_potential(entry.family, entry.params, entry.lambda);
        const BoundWindow w = bound_window(s);
        for (double frac : {0.15, 0.45, 0.8}) {
            const double E = w.lo + frac * ((std::isfinite(w.hi) ? w.hi : w.lo + 5.0) - w.lo);
            for (const auto& cp : find_turning_points(s, E)) {
                const double scale = 1.0 + std::abs(E);
                CHECK(std::abs(s.q_tilde_unguarded(cp.location, E)) <= kRootTol * scale);
            }
        }
    }
}

TEST_CASE("generic Newton root finder agrees with the analytic roots") {
    PotentialSpec s = make_potential(Family::PoschlTeller, {{"beta", 1.0}, {"beta_prime", 30.0}}, 1.0);
    const double E = -8.0;
    auto analytic = find_turning_points(s, E);
    PotentialSpec s2 = make_potential(Family::PoschlTeller, {{"beta", 1.0}, {"beta_prime", 30.0}}, 1.0,
                                      ExtraDelta{ExtraDelta::Kind::SinhHalf, 1e-9, 2.0});
    auto numeric = find_turning_points(s2, E);
    REQUIRE(analytic.size() >= 2);
    REQUIRE(numeric.size() >= analytic.size());
    for (const auto& a : analytic) {
        double best = 1e9;
        for (const auto& n : numeric) best = std::min(best, std::abs(n.location - a.location));
        CHECK(best < 1e-4);
    }
}

TEST_CASE("coincident roots at the window bottom collapse to a single entry") {
    // At E = min V the two real turning points merge exactly; the finder must
    // not report a spurious near-duplicate pair (the DEGENERATE_ROOT guard
    // covers the in-between band, unreachable for smooth merges in doubles).
    PotentialSpec m = morse11();
    auto tp = find_turning_points(m, -1.0); // window bottom: double root at x = 0
    int real_roots = 0;
    for (const auto& cp : tp)
        if (std::abs(cp.location.imag()) < 1e-8) ++real_roots;
    CHECK(real_roots == 1);
}

TEST_CASE("classify_singularities follows the family pole lattice") {
    PotentialSpec h = make_potential(Family::Harmonic, {{"alpha", 1.0}}, 1.0);
    auto sh = classify_singularities(h);
    REQUIRE(sh.size() == 2);
    CHECK(sh[0].kind == CritKind::InfinityPoint);
    CHECK(sh[1].kind == CritKind::InfinityPoint);

    PotentialSpec e = make_potential(Family::Eckart, {{"alpha", 0.5}, {"beta", 2.0}}, 1.0);
    int dp = 0;
    for (const auto& cp : classify_singularities(e))
        if (cp.kind == CritKind::DoublePole) {
            ++dp;
            CHECK(std::abs(std::abs(cp.location.imag()) - kPi) < 1e-12);
        }
    CHECK(dp == 2);

    PotentialSpec cpw =
        make_potential(Family::CoshPoleWell, {{"alpha", 1.0}, {"beta", -0.5}, {"a", 1.0}}, 1.0);
    int sp = 0;
    for (const auto& cp : classify_singularities(cpw))
        if (cp.kind == CritKind::SimplePole) {
            ++sp;
            CHECK(std::abs(std::abs(cp.location.imag()) - 1.0) < 1e-12);
            CHECK(std::abs(cp.location.real()) < 1e-12);
        }
    CHECK(sp == 2);
    CHECK(cpw.langer_delta.empty()); // simple poles of q~ stay uncorrected here
}

TEST_CASE("langer_transform maps the exponential families onto the radial ones") {
    PotentialSpec m = make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 2.0}}, 1.5);
    const double E_ref = -2.0;

    PotentialSpec coul = langer_transform(m, LangerMap::ExpFull, E_ref);
    CHECK(coul.family == Family::Coulomb);
    PotentialSpec rh = langer_transform(m, LangerMap::ExpHalf, E_ref);
    CHECK(rh.family == Family::RadialHarmonic);

    // Full change-of-variable identity, including the Jacobian term:
    // q_new(y(x)) = q_old(x)/y'^2 - (3/4 y''^2/y'^4 - 1/2 y'''/y'^3)/lambda^2.
    const double l2 = m.lambda * m.lambda;
    for (double x : {-1.2, -0.3, 0.4, 1.1}) {
        const double Enew_full = -1.0; // -alpha^2
        const Cx lhs_full = coul.q_tilde_unguarded(Cx(std::exp(x), 0.0), Enew_full);
        const Cx rhs_full =
            m.q_tilde_unguarded(Cx(x, 0.0), E_ref) * std::exp(-2.0 * x) - 0.25 * std::exp(-2.0 * x) / l2;
        CHECK(std::abs(lhs_full - rhs_full) < 1e-12 * (1.0 + std::abs(lhs_full)));

        const double Enew_half = 16.0; // 8 beta
        const Cx lhs_half = rh.q_tilde_unguarded(Cx(std::exp(0.5 * x), 0.0), Enew_half);
        const Cx rhs_half =
            m.q_tilde_unguarded(Cx(x, 0.0), E_ref) * 4.0 * std::exp(-x) - 0.25 * std::exp(-x) / l2;
        CHECK(std::abs(lhs_half - rhs_half) < 1e-12 * (1.0 + std::abs(lhs_half)));
    }

    PotentialSpec ew = make_potential(Family::ExpWell, {{"alpha", 1.0}, {"gamma", 1.0}}, 1.0);
    PotentialSpec iq = langer_transform(ew, LangerMap::ExpHalf, 3.0);
    CHECK(iq.family == Family::InvQuartic);
    CHECK_THROWS_AS(langer_transform(ew, LangerMap::ExpFull), Error);
    PotentialSpec h = make_potential(Family::Harmonic, {{"alpha", 1.0}}, 1.0);
    CHECK_THROWS_AS(langer_transform(h, LangerMap::ExpHalf), Error);
}

TEST_CASE("JSON round trip preserves the potential definition") {
    PotentialSpec s = make_potential(Family::TrigWell, {{"alpha", 1.25}}, 2.0,
                                     ExtraDelta{ExtraDelta::Kind::SinHalf, 0.3, 0.0});
    PotentialSpec t = spec_from_json(spec_to_json(s));
    CHECK(t.family == s.family);
    CHECK(t.lambda == s.lambda);
    CHECK(t.params.at("alpha") == 1.25);
    REQUIRE(t.extra_delta.has_value());
    CHECK(t.extra_delta->a == 0.3);
    for (double x : {0.3, 1.0, 2.4}) {
        CHECK(std::abs(t.q_tilde_unguarded(Cx(x, 0), 5.0) - s.q_tilde_unguarded(Cx(x, 0), 5.0)) < 1e-15);
    }
}

TEST_CASE("extra delta adds the a-term and its extra turning points") {
    PotentialSpec plain = make_potential(Family::TrigWell, {{"alpha", 1.0}}, 1.0);
    PotentialSpec varied = make_potential(Family::TrigWell, {{"alpha", 1.0}}, 1.0,
                                          ExtraDelta{ExtraDelta::Kind::SinHalf, 0.3, 0.0});
    const Cx x(1.3, 0.0);
    const Cx expect = plain.q_tilde_unguarded(x, 6.0) + 0.3 / std::pow(std::sin(0.65), 2);
    CHECK(std::abs(varied.q_tilde_unguarded(x, 6.0) - expect) < 1e-13);

    int real_roots = 0;
    for (const auto& cp : find_turning_points(varied, 6.0))
        if (std::abs(cp.location.imag()) < 1e-8) ++real_roots;
    CHECK(real_roots == 4);
}
