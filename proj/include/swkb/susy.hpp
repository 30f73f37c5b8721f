#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swkb/jet.hpp"
#include "swkb/potentials.hpp"
#include "swkb/spectrum.hpp"

namespace swkb {

// Catalog case labels as printed in the superpotential listing. The empirical
// classification (classify_susy_case) can disagree where the listing carries
// transcription slips; spectra relations always follow the empirical class.
enum class SusyCase { Exact1 = 1, Broken2 = 2, Broken3 = 3, Broken4 = 4 };

const char* susy_case_name(SusyCase c);

struct SheetCoeffs {
    std::string sheet; // e.g. "x->+inf", "pole@0"
    Cx a, b, c;        // F ~ a + b phi + c phi^2 at large |phi| on that sheet
};

struct Superpotential {
    int family = 1; // 1..10, aligned with the exact catalog order
    SusyCase catalog_case = SusyCase::Exact1;
    std::map<std::string, double> params;
    double lambda = 1.0;
    double epsilon0 = 0.0;
    PotentialSpec partner; // the catalog V_- reproduced by phi^2 - phi'/lambda + eps0

    // phi and derivatives at complex x.
    Jet2 phi_jet(Cx x) const;
    double phi(double x) const { return std::real(phi_jet(Cx(x, 0.0)).f); }

    // F1 = phi' - delta/lambda and F2 = phi' as functions of the x preimage.
    Cx F1_at(Cx x) const;
    Cx F2_at(Cx x) const;

    // Leading Laurent data of F1/F2 per sheet, fitted at large radius.
    std::vector<SheetCoeffs> leading_f1, leading_f2;

    // phi coefficient slots (family-specific), fixed at construction.
    std::array<double, 4> coeff{};
};

inline constexpr double kRiccatiTol = 1e-10;
inline constexpr double kResidueTol = 1e-6;

// Build a catalog superpotential; re-derives the coefficient identities from the
// Riccati relation and verifies them on a real grid (RICCATI_MISMATCH on failure).
Superpotential superpotential(int family, SusyCase case_tag, const std::map<std::string, double>& params,
                              double lambda);

// Empirical case classification from the boundary behaviour of exp(-lambda int phi).
SusyCase classify_susy_case(const Superpotential& phi);

enum class ResidueVariant { Plus, Minus };

// Sheet-averaged contour integral of [sqrt(phi^2 +- phi'/lambda + delta/lambda^2
// - Et) - sqrt(phi^2 - Et)] dx over the preimages of large circles on each sheet
// of R_phi; expected -i pi/lambda (Plus) and +i pi/lambda (Minus).
Cx f_residue_at_infinity(const Superpotential& phi, ResidueVariant v, double E_tilde);

// Single-region integral at a fixed radius parameter (exposed for tests; with
// zero_F1 the integrand is identically zero).
Cx residue_region_integral(const Superpotential& phi, ResidueVariant v, double E_tilde, int region,
                           double rho, bool zero_F1 = false);
int residue_region_count(const Superpotential& phi);

enum class ShiftClass { Shift0, ShiftHalf, ShiftOne };
const char* shift_name(ShiftClass s);

// Compares swkb_spectrum(phi) with the conventional condition by mapping each
// SWKB level to its continuous JWKB index; the constant offset classifies the
// enumeration shift (NO_CONSTANT_SHIFT if none fits).
ShiftClass verify_level_shift(const PotentialSpec& spec, const Superpotential& phi, int m_max);

// SWKB spectrum of a catalog superpotential.
SpectrumResult swkb_spectrum(const Superpotential& phi, int m_max);

// Cases printed in the listing for a family.
std::vector<SusyCase> catalog_cases(int family);

} // namespace swkb
