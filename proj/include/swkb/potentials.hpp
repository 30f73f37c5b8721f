#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swkb/jet.hpp"

namespace swkb {

// Catalog of potential families. Hyperbolic/exponential members are 2*pi*i
// periodic in x, trigonometric ones 2*pi periodic; the rest are aperiodic.
enum class Family {
    Harmonic,       // a^2 x^2 on R
    Morse,          // a^2 e^{2x} - 2 b e^x on R
    ExpWell,        // a e^x + g e^{-x} on R (infinite well)
    CubicExp,       // a (e^x-b+)(e^x-b-)(e^x+g) on R
    ExpWell2,       // a (e^x-b+)(e^x-b-)(e^{-x}+g) on R
    Coulomb,        // -a/x + b/x^2 on (0,inf)
    RadialHarmonic, // a^2 x^2 + b/x^2 on (0,inf)
    InvQuartic,     // a/x^4 - b/x^2 on (0,inf)
    Eckart,         // (a e^x - b)/cosh^2(x/2) on R
    SinhWell,       // (a e^x + b)/sinh^2(x/2) on (0,inf)
    PoschlTeller,   // b/sinh^2(x/2) - b'/cosh^2(x/2) on (0,inf)
    TrigWell,       // a/cos^2(x/2) on (-pi,pi)
    TrigBox,        // a/cos^2(x/2) + b/sin^2(x/2) on (0,pi)
    ScarfTrig,      // (a + b sin x)/cos^2 x on (-pi/2,pi/2)
    ScarfHyp,       // (a + b sinh x)/cosh^2 x on R
    CoshPoleWell,   // (a e^x + b)/(cosh x - cos p) on R, simple poles at +-i p
    SinhPoleWell,   // (a e^x + b)/sinh x on (0,inf)
};

const char* family_name(Family f);
Family family_from_name(const std::string& name);

enum class EndpointKind { Regular, SecondOrderPole, HigherPole, Infinity };

struct Domain {
    double lo = 0, hi = 0;
    EndpointKind lo_kind = EndpointKind::Infinity;
    EndpointKind hi_kind = EndpointKind::Infinity;
};

enum class PeriodAxis { None, Imag2Pi, Real2Pi };

// One Langer term of the form c / (2 f((x-x0)/s))^2; evaluation is done by the
// owning spec, this record documents the attached correction.
struct DeltaTerm {
    enum class Shape { InvX, SinhHalf, CoshHalf, SinHalf, CosHalf, SinhFull, CosFull, CoshFull };
    Shape shape;
    double c;  // spec-level coefficient; local behaviour at each pole is 1/(4(x-z)^2)
    Cx x0{0.0, 0.0};
};

// Optional extra delta of the form a*lambda^2/shape^2, entering q~ directly as
// a/shape^2 (the a-parameter freedom of the catalog's variant formulae).
struct ExtraDelta {
    enum class Kind { SinhHalf, SinHalf };
    Kind kind = Kind::SinhHalf;
    double a = 0.0;
    double x0 = 0.0;
};

enum class CritKind { TurningPoint, SimplePole, DoublePole, HigherPole, InfinityPoint };

struct CriticalPoint {
    Cx location;
    CritKind kind;
    int order = 0;       // pole order where applicable
    int strip_index = 0; // which period copy; 0 = basic strip
    bool real_pair = false; // one of the two real turning points bounding the well
};

struct Region {
    double re_lo, re_hi, im_lo, im_hi;
    bool contains(Cx z, double slack = 1e-9) const {
        return z.real() >= re_lo - slack && z.real() <= re_hi + slack && z.imag() >= im_lo - slack &&
               z.imag() <= im_hi + slack;
    }
};

struct PotentialSpec {
    Family family;
    std::map<std::string, double> params;
    double lambda = 1.0;
    Domain domain;
    PeriodAxis period = PeriodAxis::None;
    std::vector<DeltaTerm> langer_delta;
    std::optional<ExtraDelta> extra_delta;

    // V(x) and its first two derivatives.
    Jet2 potential_jet(Cx x) const;
    Cx potential(Cx x) const { return potential_jet(x).f; }

    // Langer correction delta(x) (the lambda-free part; enters q~ as delta/lambda^2)
    // plus the extra a-term contribution already scaled into q~ units.
    Jet2 delta_jet(Cx x) const;
    Jet2 extra_jet(Cx x) const;

    // q~ = V + delta/lambda^2 + extra - E. Throws POLE_HIT within pole_guard of a pole.
    Cx q_tilde(Cx x, double E) const;
    Jet2 q_tilde_jet(Cx x, double E) const;
    // Same value without the pole-proximity guard (used by contour machinery that
    // manages its own clearances).
    Cx q_tilde_unguarded(Cx x, double E) const;

    double pole_distance(Cx x) const;
    double param(const std::string& key) const;

    // Basic-strip rectangle for root searches and Stokes tracing at energy E.
    Region basic_strip(double E) const;
};

inline constexpr double kRootTol = 1e-10;
inline constexpr double kRootMergeTol = 1e-8;
inline constexpr double kPoleGuard = 1e-8;

PotentialSpec make_potential(Family family, const std::map<std::string, double>& params, double lambda,
                             std::optional<ExtraDelta> extra = {});

// All simple roots of q~ in the region, deduplicated and sorted by real part;
// the two real turning points bounding the classically allowed region flagged.
std::vector<CriticalPoint> find_turning_points(const PotentialSpec& spec, double E, const Region& region);
std::vector<CriticalPoint> find_turning_points(const PotentialSpec& spec, double E);

// The two real turning points (x-,x+) with q~ < 0 between them.
std::pair<double, double> real_turning_pair(const PotentialSpec& spec, double E);
bool has_two_real_turning_points(const PotentialSpec& spec, double E);

// Pole lattice of q~ in the basic strip plus endpoint infinity markers.
std::vector<CriticalPoint> classify_singularities(const PotentialSpec& spec);

// Bound-state window (E_lo, E_hi) on which q~ has two simple real roots with a
// classically allowed region between them. E_hi may be +infinity (hard walls).
struct BoundWindow {
    double lo, hi;
    bool hi_open_ended;
};
BoundWindow bound_window(const PotentialSpec& spec);

// Finite limit of f toward an infinite endpoint, if any, via a three-depth
// 1/x-tail extrapolation cross-checked at a fourth depth.
bool tail_limit(const std::function<double(double)>& f, bool upper, double* limit);

enum class LangerMap { ExpHalf, ExpFull };

// Change-of-variable transform (e^{x/2}->x or e^x->x) including the 1/lambda^2
// Jacobian correction. E_ref selects the old-energy slice that becomes the new
// centrifugal coefficient; defaults to a family-specific representative energy.
PotentialSpec langer_transform(const PotentialSpec& spec, LangerMap map, std::optional<double> E_ref = {});

// JSON round trip: {"family":..., "params":{...}, "lambda":..., "extra_delta":?}
std::string spec_to_json(const PotentialSpec& spec);
PotentialSpec spec_from_json(const std::string& text);

} // namespace swkb
