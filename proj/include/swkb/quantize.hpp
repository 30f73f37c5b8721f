#pragma once

#include <functional>

#include "swkb/potentials.hpp"
#include "swkb/spectrum.hpp"

namespace swkb {

inline constexpr double kSolveTol = 1e-10;

// Energy levels from -lambda * contour integral sqrt(q~) = (2m+1) pi i, i.e.
// Im A(E_m) = (2m+1) pi with A monotone on the bound window.
SpectrumResult wkb_spectrum(const PotentialSpec& spec, int m_max);

// Continuous JWKB index nu(E) defined by Im A(E) = (2 nu + 1) pi.
double wkb_index(const PotentialSpec& spec, double E);

// Energy level at a possibly half-integer index (target Im A = (2 nu + 1) pi).
double wkb_level_at_index(const PotentialSpec& spec, double nu);

// SWKB condition on a real superpotential profile phi over (dom_lo, dom_hi):
// 2 lambda int sqrt(Etil - phi^2) dx = 2 pi m, E = Etil + eps0. When phi has no
// real zero the m=0 root does not exist and enumeration starts at m=1.
SpectrumResult swkb_spectrum_fn(const std::function<double(double)>& phi, double dom_lo, double dom_hi,
                                double lambda, double eps0, int m_max, const std::string& label);

} // namespace swkb
