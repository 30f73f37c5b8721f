#pragma once

#include <string>
#include <vector>

#include "swkb/potentials.hpp"
#include "swkb/spectrum.hpp"

namespace swkb {

// All floating-point output carries 17 significant digits so byte equality of
// reports is meaningful.
std::string float17(double v);

void atomic_write(const std::string& path, const std::string& content);

std::string params_hash(const PotentialSpec& spec);

// CSV per the spectrum interface: method,family,params_hash,m,E,residual
std::string spectrum_csv(const SpectrumResult& r, const PotentialSpec& spec);
std::string comparison_csv(const ComparisonReport& rep, const std::string& label_a,
                           const std::string& label_b);
std::string comparison_json(const ComparisonReport& rep, const std::string& label_a,
                            const std::string& label_b);

struct VerdictRow {
    std::string family;
    std::string params;
    double lambda;
    std::string verdict; // EXACT | NOT-EXACT
    double max_rel_diff;
    int levels;
};

// Reproduces the exact/non-exact classification of the catalog by comparing
// JWKB spectra with the grid oracle at desk-scale parameter sets.
std::vector<VerdictRow> verdict_table(int m_max = 5);
std::string verdict_csv(const std::vector<VerdictRow>& rows);

// Catalog parameter sets used by the verdict table and the acceptance suite.
struct CatalogEntry {
    Family family;
    std::map<std::string, double> params;
    double lambda;
    bool exact;
};
const std::vector<CatalogEntry>& catalog_reference_entries();

} // namespace swkb
