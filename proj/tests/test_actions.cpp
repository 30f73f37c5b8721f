#include <doctest.h>

#include <cmath>

#include "swkb/actions.hpp"
#include "swkb/errors.hpp"
#include "swkb/numeric.hpp"
#include "swkb/potentials.hpp"
#include "swkb/report.hpp"
#include "swkb/stokes.hpp"

using namespace swkb;

namespace {
const Cx I(0.0, 1.0);
}

TEST_CASE("action_between: degenerate and closed-form segments") {
    PotentialSpec h = make_potential(Family::Harmonic, {{"alpha", 1.0}}, 1.0);
    CHECK(std::abs(action_between(h, 1.0, Cx(0.3, 0.1), Cx(0.3, 0.1)).value) == 0.0);

    // int sqrt(x^2-1) over [-1,1] = +- i pi/2 depending on the branch.
    ActionValue a = action_between(h, 1.0, Cx(-1, 0), Cx(1, 0));
    CHECK(std::abs(a.value.real()) < 1e-10);
    CHECK(std::abs(std::abs(a.value.imag()) - kPi / 2) < 1e-10);
    CHECK(a.abs_error_estimate < 1e-8);

    PotentialSpec m = make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 1.0}}, 1.0);
    ActionValue am = action_between(m, -0.75, Cx(std::log(0.5), 0), Cx(std::log(1.5), 0));
    CHECK(std::abs(am.value.real()) < 1e-9);
    CHECK(std::abs(am.value.imag()) > 0.01);
}

TEST_CASE("PATH_THROUGH_POLE is detected") {
    PotentialSpec c = make_potential(Family::Coulomb, {{"alpha", 2.0}, {"beta", 1.0}}, 1.0);
    CHECK_THROWS_AS(action_between(c, -0.5, Cx(-1.0, 0), Cx(1.0, 0)), Error);
}

TEST_CASE("contour_action closed forms for the harmonic oscillator") {
    PotentialSpec h = make_potential(Family::Harmonic, {{"alpha", 1.0}}, 1.0);
    ActionValue a3 = contour_action(h, 3.0);
    CHECK(std::abs(a3.value - Cx(0.0, 3.0 * kPi)) < 1e-9);
    ActionValue a1 = contour_action(h, 1.0);
    CHECK(std::abs(a1.value - Cx(0.0, kPi)) < 1e-9); // the m = 0 condition (2*0+1) pi i
}

TEST_CASE("morse ground state closes the (2m+1) pi i condition at lambda = 2") {
    // E_0 = -(beta/alpha - 1/(2 lambda))^2 from the closed-form action.
    PotentialSpec m = make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 1.0}}, 2.0);
    const double E0 = -std::pow(1.0 - 0.25, 2);
    ActionValue a = contour_action(m, E0);
    CHECK(std::abs(a.value - Cx(0.0, kPi)) < 1e-8);
}

TEST_CASE("contour action agrees with the independent closed-loop route") {
    for (const auto& entry : {catalog_reference_entries()[0], catalog_reference_entries()[7]}) {
        CAPTURE(family_name(entry.family));
        PotentialSpec s = make_potential(entry.family, entry.params, entry.lambda);
        const BoundWindow w = bound_window(s);
        const double E = w.lo + 0.5 * ((std::isfinite(w.hi) ? w.hi : w.lo + 6.0) - w.lo);
        const auto pair = real_turning_pair(s, E);
        ActionValue direct = contour_action(s, E, pair);
        ActionValue loop = contour_action_loop(s, E, pair);
        CHECK(std::abs(direct.value - loop.value) < 1e-8 * (1.0 + std::abs(direct.value)));
    }
}

TEST_CASE("A(E) is strictly increasing and purely imaginary on the bound window") {
    for (const auto& entry : catalog_reference_entries()) {
        CAPTURE(family_name(entry.family));
        PotentialSpec s = make_potential(entry.family, entry.params, entry.lambda);
        const BoundWindow w = bound_window(s);
        const double top = std::isfinite(w.hi) ? w.hi : w.lo + 8.0;
        double prev = -1.0;
        for (int i = 1; i <= 50; ++i) {
            const double E = w.lo + (top - w.lo) * i / 51.0;
            if (!has_two_real_turning_points(s, E)) continue;
            const ActionValue a = contour_action(s, E, real_turning_pair(s, E), 1e-9);
            CHECK(std::abs(a.value.real()) <= 1e-10 * std::abs(a.value));
            CHECK(a.value.imag() > prev);
            prev = a.value.imag();
        }
        CHECK(prev > 0.0);
    }
}

namespace {

// Canonical chi paths built from the sector geometry. Harmonic: in along the
// real axis, then straight up at Re = c; Re W decreases monotonically into the
// upper sector and the exponential factor decays. Exponential well: in along
// the real axis, then up toward the strip edge at Im = pi.
Polyline chi_path_harmonic(double c, double reach) {
    Polyline p;
    p.points = {Cx(reach, 0.0), Cx(c, 0.0), Cx(c, reach)};
    return p;
}

Polyline chi_path_exp_well(double c, double reach, double top_gap) {
    Polyline p;
    p.points = {Cx(reach, 0.0), Cx(c, 0.0)};
    for (int k = 1; k <= 24; ++k)
        p.points.push_back(Cx(c, (kPi - top_gap) * k / 24.0));
    return p;
}

} // namespace

TEST_CASE("chi first order vanishes for the harmonic oscillator") {
    PotentialSpec h = make_potential(Family::Harmonic, {{"alpha", 1.0}}, 1.0);
    const double E = 1.0;
    Polyline path = chi_path_harmonic(1.7, 1.0e4);
    const Cx v = chi_first_order(h, E, path, -1, 1e-12);
    CAPTURE(v.real());
    CAPTURE(v.imag());
    CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("chi first order does not vanish for the exponential well") {
    PotentialSpec ew = make_potential(Family::ExpWell, {{"alpha", 1.0}, {"gamma", 1.0}}, 1.0);
    const double E = 3.0;
    Polyline path = chi_path_exp_well(real_turning_pair(ew, E).second + 0.6, 30.0, 0.15);
    const Cx v1 = chi_first_order(ew, E, path, -1);
    CAPTURE(v1.real());
    CAPTURE(v1.imag());
    CHECK(std::abs(v1) > 1e-4);

    // Doubling lambda scales the first-order term roughly like 1/2.
    PotentialSpec ew2 = make_potential(Family::ExpWell, {{"alpha", 1.0}, {"gamma", 1.0}}, 2.0);
    const Cx v2 = chi_first_order(ew2, E, path, -1);
    const double ratio = std::abs(v2) / std::abs(v1);
    CHECK(ratio > 0.3);
    CHECK(ratio < 0.7);
}

TEST_CASE("NON_CANONICAL_PATH rejects a path with the wrong sigma") {
    PotentialSpec ew = make_potential(Family::ExpWell, {{"alpha", 1.0}, {"gamma", 1.0}}, 1.0);
    Polyline path = chi_path_exp_well(real_turning_pair(ew, 3.0).second + 0.6, 30.0, 0.15);
    CHECK_THROWS_AS(chi_first_order(ew, 3.0, path, +1), Error);
}
