#pragma once

#include <vector>

#include "swkb/geometry.hpp"
#include "swkb/potentials.hpp"

namespace swkb {

inline constexpr double kPhaseTol = 1e-6;

// Continuously tracked (unwrapped) argument of q~ along a polyline, starting
// from the principal value at the path start; returns the final unwrapped
// argument. ROOT_TOO_CLOSE when the path runs too near a zero or pole of q~.
double phase_along_path(const PotentialSpec& spec, double E, const Polyline& path);

struct PhaseAudit {
    int n_roots_used = 0;
    Polyline path_a, path_b;   // strip-edge paths the comparison refers to
    double phase_a = 0.0;      // bookkeeping total argument at x0 (upper line)
    double phase_b = 0.0;      // ... at x0 - 2 pi i (lower line)
    double difference = 0.0;   // phase_b - phase_a, extrapolated in the pair count
    double difference_direct = 0.0; // method (a): tracking along the connecting segment
    double raw_half = 0.0, raw_full = 0.0; // truncated differences at n/2 and n pairs
    bool converged = false;
};

// Appendix-style strip phase difference for the abbreviated-exponential-sum
// families: the total argument change of q~ between x0 = x0_real + i pi and
// x0 - 2 pi i, computed (a) by direct continuous tracking along the vertical
// segment and (b) by the truncated-product bookkeeping over n_pairs symmetric
// root pairs plus the e^{(k+l)x/2} prefactor contribution.
PhaseAudit strip_phase_difference(const PotentialSpec& spec, double E, double x0_real, int n_pairs = 64);

} // namespace swkb
