#pragma once

#include <string>
#include <vector>

namespace swkb {

enum class Method { JWKB, SWKB, ORACLE };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::JWKB: return "JWKB";
        case Method::SWKB: return "SWKB";
        case Method::ORACLE: return "ORACLE";
    }
    return "?";
}

struct SpectrumLevel {
    int m;
    double E;
    double residual;   // solver residual (action residual or Richardson gap)
    int iterations;
};

struct SpectrumResult {
    Method method;
    std::string label;
    std::vector<SpectrumLevel> levels;
    int requested_m_max = 0;
    int omitted_above_window = 0; // levels that left the bound window
};

struct ComparisonRow {
    int m;
    double E_a, E_b, abs_diff, rel_diff;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    double max_abs_diff = 0.0;
    double max_rel_diff = 0.0;
    double tol = 0.0;
    bool match = false;
};

enum class Alignment { ByM, ByRank };

ComparisonReport compare_spectra(const SpectrumResult& a, const SpectrumResult& b, double tol,
                                 Alignment align = Alignment::ByM);

} // namespace swkb
