#include <doctest.h>

#include <cmath>

#include "swkb/errors.hpp"
#include "swkb/numeric.hpp"
#include "swkb/oracle.hpp"
#include "swkb/potentials.hpp"

using namespace swkb;

TEST_CASE("oracle reproduces the harmonic ladder 1, 3, 5") {
    PotentialSpec h = make_potential(Family::Harmonic, {{"alpha", 1.0}}, 1.0);
    SpectrumResult r = oracle_spectrum(h, 2, 1e-8);
    REQUIRE(r.levels.size() == 3);
    for (int m = 0; m <= 2; ++m) {
        CHECK(r.levels[m].m == m);
        CHECK(std::abs(r.levels[m].E - (2.0 * m + 1.0)) < 1e-8);
    }
}

TEST_CASE("oracle matches the closed-form Morse ground state at lambda = 2") {
    PotentialSpec m = make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 1.0}}, 2.0);
    SpectrumResult r = oracle_spectrum(m, 0, 1e-8);
    REQUIRE(r.levels.size() == 1);
    CHECK(std::abs(r.levels[0].E - (-0.5625)) < 1e-7);
    CHECK(r.levels[0].residual < 1e-8);
}

TEST_CASE("oracle matches the closed-form Coulomb and trig-box ladders") {
    PotentialSpec c = make_potential(Family::Coulomb, {{"alpha", 2.0}, {"beta", 1.0}}, 1.0);
    SpectrumResult rc = oracle_spectrum(c, 3, 1e-8);
    REQUIRE(rc.levels.size() == 4);
    for (const auto& lv : rc.levels) {
        const double expect = -1.0 / std::pow(lv.m + 0.5 + std::sqrt(1.25), 2);
        CHECK(std::abs(lv.E - expect) < 1e-8 * (1.0 + std::abs(expect)) * 10);
    }

    PotentialSpec tb = make_potential(Family::TrigBox, {{"alpha", 1.0}, {"beta", 1.0}}, 1.0);
    SpectrumResult rt = oracle_spectrum(tb, 3, 1e-8);
    const double a = 0.5 * (1.0 + std::sqrt(17.0));
    REQUIRE(rt.levels.size() == 4);
    for (const auto& lv : rt.levels) {
        const double expect = std::pow((2.0 * a + 2.0 * lv.m) / 2.0, 2);
        CHECK(std::abs(lv.E - expect) < 1e-6 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("node count of the m-th eigenfunction equals m") {
    PotentialSpec pt = make_potential(Family::PoschlTeller, {{"beta", 1.0}, {"beta_prime", 30.0}}, 1.0);
    SpectrumResult r = oracle_spectrum(pt, 3, 1e-8);
    REQUIRE(r.levels.size() == 4);
    for (const auto& lv : r.levels) {
        const double d = 1e-6 * (1.0 + std::abs(lv.E));
        CHECK(oracle_node_count(pt, lv.E - d, 12000) == lv.m);
        CHECK(oracle_node_count(pt, lv.E + d, 12000) == lv.m + 1);
    }
}

TEST_CASE("eigenvalues move monotonically under grid refinement") {
    PotentialSpec m = make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 6.0}}, 1.0);
    const double cap = -1.0;
    const double e1 = oracle_level_raw(m, 1, cap, 4000);
    const double e2 = oracle_level_raw(m, 1, cap, 8000);
    const double e3 = oracle_level_raw(m, 1, cap, 16000);
    CHECK(std::abs(e3 - e2) < std::abs(e2 - e1));
    CHECK((e2 - e1) * (e3 - e2) >= 0.0); // same side throughout the refinement
}

TEST_CASE("doubling the truncation box shifts exponentially confined levels below 1e-9") {
    PotentialSpec m = make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 6.0}}, 1.0);
    OracleOptions tight;
    OracleOptions wide;
    wide.decay_action = 2.0 * tight.decay_action;
    SpectrumResult a = oracle_spectrum(m, 2, 1e-8, tight);
    SpectrumResult b = oracle_spectrum(m, 2, 1e-8, wide);
    for (size_t i = 0; i < a.levels.size(); ++i)
        CHECK(std::abs(a.levels[i].E - b.levels[i].E) <= 1e-9 * (1.0 + std::abs(a.levels[i].E)));
}

TEST_CASE("GRID_TOO_COARSE guards unreachable tolerances") {
    PotentialSpec m = make_potential(Family::Morse, {{"alpha", 1.0}, {"beta", 6.0}}, 1.0);
    OracleOptions coarse;
    coarse.base_points = 400;
    CHECK_THROWS_AS(oracle_spectrum(m, 2, 1e-12, coarse), Error);
}

TEST_CASE("compare_spectra verdicts") {
    SpectrumResult a;
    a.method = Method::JWKB;
    a.levels = {{0, 1.0, 0, 0}, {1, 3.0, 0, 0}};
    ComparisonReport same = compare_spectra(a, a, 1e-6);
    CHECK(same.match);
    CHECK(same.max_abs_diff == 0.0);

    SpectrumResult b = a;
    b.levels[1].E = 3.001;
    ComparisonReport diff = compare_spectra(a, b, 1e-6);
    CHECK(!diff.match);
    CHECK(diff.max_abs_diff == doctest::Approx(0.001));

    SpectrumResult empty;
    CHECK_THROWS_AS(compare_spectra(a, empty, 1e-6), Error);
}
