#pragma once

#include <complex>
#include <string>
#include <vector>

#include "swkb/geometry.hpp"
#include "swkb/potentials.hpp"

namespace swkb {

struct ActionValue {
    Cx value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    std::string path_descriptor;
};

inline constexpr double kQuadTol = 1e-11;

enum class PathKind { RealSegment, Polyline };

// Integral of sqrt(q~) dy along a straight segment or polyline, with continuous
// branch continuation from x1. Square-root endpoint singularities at turning
// points are absorbed by the x = x_t + t^2 substitution.
ActionValue action_between(const PotentialSpec& spec, double E, Cx x1, Cx x2,
                           PathKind kind = PathKind::RealSegment, double tol = kQuadTol);
ActionValue action_along(const PotentialSpec& spec, double E, const std::vector<Cx>& pts,
                         double tol = kQuadTol);

// A(E) = -lambda * contour integral of sqrt(q~) around the two real turning
// points, normalized so that Im A > 0 and A is increasing in E on the bound
// window. Computed as 2*i*lambda * int_{x-}^{x+} sqrt(-q~) dx.
ActionValue contour_action(const PotentialSpec& spec, double E, std::pair<double, double> pair,
                           double tol = kQuadTol);
ActionValue contour_action(const PotentialSpec& spec, double E, double tol = kQuadTol);

// Independent route: branch-tracked quadrature of -lambda * closed-loop
// integral along a stadium-shaped polyline surrounding the turning pair.
ActionValue contour_action_loop(const PotentialSpec& spec, double E, std::pair<double, double> pair,
                                double tol = 1e-9);

// First-order term of the chi series along a canonical path ending at the
// anchor (path.points.back()): (-sigma/2 lambda) * int omega(y) (1 - e^{-2 sigma
// lambda (W(x)-W(y))}) dy. Errors with NON_CANONICAL_PATH when Re(sigma W)
// fails to be monotone along the path.
Cx chi_first_order(const PotentialSpec& spec, double E, const Polyline& path, int sigma,
                   double tol = 1e-10);

} // namespace swkb
