#include <doctest.h>

#include <cmath>

#include "swkb/errors.hpp"
#include "swkb/numeric.hpp"
#include "swkb/phase.hpp"
#include "swkb/potentials.hpp"

using namespace swkb;

namespace {
const Cx I(0.0, 1.0);
}

TEST_CASE("phase_along_path: constant-positive and winding cases") {
    PotentialSpec h = make_potential(Family::Harmonic, {{"alpha", 1.0}}, 1.0);

    // q~ > 0 along a real segment right of the turning point: unwrapped arg 0.
    Polyline seg;
    seg.points = {Cx(2.0, 0.0), Cx(5.0, 0.0)};
    CHECK(std::abs(phase_along_path(h, 1.0, seg)) < 1e-12);

    // Small circle around the simple zero x = +1: winding 2 pi.
    Polyline circle;
    const double r = 0.25;
    for (int k = 0; k <= 64; ++k)
        circle.points.push_back(Cx(1.0, 0.0) + r * std::exp(I * (2.0 * kPi * k / 64.0)));
    const double start = std::arg(h.q_tilde_unguarded(circle.points.front(), 1.0));
    CHECK(std::abs(phase_along_path(h, 1.0, circle) - start - 2.0 * kPi) < 1e-12);

    // Refinement stability along the Morse strip line Im x = pi.
    PotentialSpec m = make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 1.0}}, 1.0);
    Polyline line_coarse, line_fine;
    for (int k = 0; k <= 8; ++k) line_coarse.points.push_back(Cx(-2.0 + 5.0 * k / 8.0, kPi));
    for (int k = 0; k <= 301; ++k) line_fine.points.push_back(Cx(-2.0 + 5.0 * k / 301.0, kPi));
    const double pa = phase_along_path(m, -0.75, line_coarse);
    const double pb = phase_along_path(m, -0.75, line_fine);
    CHECK(std::abs(pa - pb) <= 1e-8);

    // ROOT_TOO_CLOSE when the path runs through a zero of q~.
    Polyline through;
    through.points = {Cx(0.0, 0.0), Cx(2.0, 0.0)};
    CHECK_THROWS_AS(phase_along_path(h, 1.0, through), Error);
}

TEST_CASE("strip phase difference: Morse gives -4 pi, with prefactor bookkeeping") {
    PotentialSpec m = make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 1.0}}, 1.0);
    PhaseAudit a = strip_phase_difference(m, -0.75, 4.0, 64);
    CHECK(std::abs(a.difference - (-4.0 * kPi)) < kPhaseTol);
    CHECK(std::abs(a.difference - a.difference_direct) < kPhaseTol);
    CHECK(a.converged);
    // The appendix intermediate values: total argument pi at x0, -3 pi below.
    // Intermediate values carry the finite-window truncation; only the
    // difference is asserted tightly.
    CHECK(std::abs(a.phase_a - kPi) < 0.06);
    CHECK(std::abs(a.phase_b - (-3.0 * kPi)) < 0.06);
}

TEST_CASE("strip phase difference at the minimum pair count meets the tolerance") {
    PotentialSpec m = make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 1.0}}, 1.0);
    PhaseAudit a = strip_phase_difference(m, -0.75, 4.0, 32);
    CHECK(std::abs(a.difference - (-4.0 * kPi)) < kPhaseTol);
}

TEST_CASE("strip phase difference: exponential well gives +-2 pi") {
    PotentialSpec ew = make_potential(Family::ExpWell, {{"alpha", 1.0}, {"gamma", 1.0}}, 1.0);
    PhaseAudit a = strip_phase_difference(ew, 2.5, 4.0, 64);
    CHECK(std::abs(std::abs(a.difference) - 2.0 * kPi) < kPhaseTol);
    CHECK(std::abs(a.difference - a.difference_direct) < kPhaseTol);
}

TEST_CASE("strip phase difference: cubic exponential gives magnitude 6 pi") {
    PotentialSpec ce = make_potential(
        Family::CubicExp, {{"alpha", 1.0}, {"beta_plus", 4.0}, {"beta_minus", 1.0}, {"gamma", 1.0}}, 1.0);
    PhaseAudit a = strip_phase_difference(ce, 0.0, 4.0, 64);
    CHECK(std::abs(std::abs(a.difference) - 6.0 * kPi) < kPhaseTol);
    CHECK(std::abs(a.difference - a.difference_direct) < kPhaseTol);
}

TEST_CASE("truncation convergence is monotone from 8 pairs up") {
    PotentialSpec m = make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 1.0}}, 1.0);
    double prev_gap = 1e9;
    for (int n : {8, 16, 32, 64, 128}) {
        PhaseAudit a = strip_phase_difference(m, -0.75, 4.0, n);
        const double gap = std::abs(a.raw_full - a.raw_half);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("strip phase difference rejects non exponential-sum families") {
    PotentialSpec h = make_potential(Family::Harmonic, {{"alpha", 1.0}}, 1.0);
    CHECK_THROWS_AS(strip_phase_difference(h, 1.0, 4.0, 32), Error);
}
