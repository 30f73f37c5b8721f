#pragma once

#include "swkb/potentials.hpp"
#include "swkb/spectrum.hpp"

namespace swkb {

// Independent grid eigenvalue solver for -(1/lambda^2) psi'' + V psi = E psi on
// the family's domain (true potential V, no delta term), via Numerov sweeps with
// node-counting bisection and two-grid Richardson extrapolation.
struct OracleOptions {
    int base_points = 12000;   // coarse grid intervals; fine grid doubles this
    double decay_action = 32.0; // lambda * int sqrt(V-E) accumulated into truncated tails
    double bisect_rel = 1e-13;
};

SpectrumResult oracle_spectrum(const PotentialSpec& spec, int m_max, double tol,
                               const OracleOptions& opt = {});

// Diagnostics used by the property tests: a single-grid (no Richardson) level
// and the Sturm node count below E on a given grid resolution.
double oracle_level_raw(const PotentialSpec& spec, int m, double E_cap_hint, int n_points,
                        const OracleOptions& opt = {});
int oracle_node_count(const PotentialSpec& spec, double E, int n_points, const OracleOptions& opt = {});

} // namespace swkb
