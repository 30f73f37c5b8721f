#include "swkb/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "swkb/errors.hpp"
#include "swkb/oracle.hpp"
#include "swkb/quantize.hpp"

namespace swkb {

std::string float17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) fail(Errc::BadConfig, "cannot open for writing: " + tmp);
        f.write(content.data(), (std::streamsize)content.size());
        if (!f) fail(Errc::BadConfig, "short write: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) fail(Errc::BadConfig, "rename failed: " + path);
}

std::string params_hash(const PotentialSpec& spec) {
    std::ostringstream ss;
    ss << family_name(spec.family) << "|";
    for (const auto& [k, v] : spec.params) ss << k << "=" << float17(v) << ";";
    ss << "lambda=" << float17(spec.lambda);
    if (spec.extra_delta && spec.extra_delta->a != 0.0)
        ss << ";extra=" << float17(spec.extra_delta->a) << "@" << float17(spec.extra_delta->x0);
    // FNV-1a 64.
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : ss.str()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

std::string spectrum_csv(const SpectrumResult& r, const PotentialSpec& spec) {
    std::ostringstream s;
    s << "method,family,params_hash,m,E,residual\r\n";
    const std::string h = params_hash(spec);
    for (const auto& lv : r.levels) {
        s << method_name(r.method) << "," << family_name(spec.family) << "," << h << "," << lv.m << ","
          << float17(lv.E) << "," << float17(lv.residual) << "\r\n";
    }
    return s.str();
}

std::string comparison_csv(const ComparisonReport& rep, const std::string& a, const std::string& b) {
    std::ostringstream s;
    s << "m,E_" << a << ",E_" << b << ",abs_diff,rel_diff\r\n";
    for (const auto& r : rep.rows)
        s << r.m << "," << float17(r.E_a) << "," << float17(r.E_b) << "," << float17(r.abs_diff) << ","
          << float17(r.rel_diff) << "\r\n";
    s << "verdict," << (rep.match ? "MATCH" : "MISMATCH") << ",tol," << float17(rep.tol) << ",max_abs,"
      << float17(rep.max_abs_diff) << "\r\n";
    return s.str();
}

std::string comparison_json(const ComparisonReport& rep, const std::string& a, const std::string& b) {
    std::ostringstream s;
    s << "{\n  \"method_a\": \"" << a << "\",\n  \"method_b\": \"" << b << "\",\n  \"levels\": [";
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        s << (i ? ", " : "") << "{\"m\": " << r.m << ", \"E_a\": " << float17(r.E_a)
          << ", \"E_b\": " << float17(r.E_b) << ", \"abs_diff\": " << float17(r.abs_diff)
          << ", \"rel_diff\": " << float17(r.rel_diff) << "}";
    }
    s << "],\n  \"max_abs_diff\": " << float17(rep.max_abs_diff)
      << ",\n  \"max_rel_diff\": " << float17(rep.max_rel_diff) << ",\n  \"tol\": " << float17(rep.tol)
      << ",\n  \"verdict\": \"" << (rep.match ? "MATCH" : "MISMATCH") << "\"\n}\n";
    return s.str();
}

const std::vector<CatalogEntry>& catalog_reference_entries() {
    static const std::vector<CatalogEntry> entries = {
        {Family::Morse, {{"alpha", 1.0}, {"beta", 6.0}}, 1.0, true},
        {Family::Coulomb, {{"alpha", 2.0}, {"beta", 1.0}}, 1.0, true},
        {Family::RadialHarmonic, {{"alpha", 1.0}, {"beta", 2.0}}, 1.0, true},
        {Family::Eckart, {{"alpha", 0.5}, {"beta", 30.0}}, 1.0, true},
        {Family::SinhWell, {{"alpha", -10.0}, {"beta", 15.0}}, 4.0, true},
        {Family::PoschlTeller, {{"beta", 1.0}, {"beta_prime", 60.0}}, 1.0, true},
        {Family::TrigWell, {{"alpha", 1.0}}, 1.0, true},
        {Family::TrigBox, {{"alpha", 1.0}, {"beta", 1.0}}, 1.0, true},
        {Family::ScarfTrig, {{"alpha", 2.0}, {"beta", 1.0}}, 1.0, true},
        {Family::ScarfHyp, {{"alpha", 1.0}, {"beta", 90.0}}, 1.0, true},
        {Family::ExpWell, {{"alpha", 1.0}, {"gamma", 1.0}}, 1.0, false},
        {Family::CubicExp, {{"alpha", 1.0}, {"beta_plus", 4.0}, {"beta_minus", 1.0}, {"gamma", 1.0}}, 1.0,
         false},
        {Family::ExpWell2, {{"alpha", 1.0}, {"beta_plus", 4.0}, {"beta_minus", 1.0}, {"gamma", 1.0}}, 1.0,
         false},
        {Family::CoshPoleWell, {{"alpha", 1.0}, {"beta", -4.0}, {"a", 1.5707963267948966}}, 1.0, false},
        {Family::SinhPoleWell, {{"alpha", 6.0}, {"beta", -5.5}}, 1.0, false},
    };
    return entries;
}

std::vector<VerdictRow> verdict_table(int m_max) {
    std::vector<VerdictRow> rows;
    for (const auto& entry : catalog_reference_entries()) {
        const PotentialSpec spec = make_potential(entry.family, entry.params, entry.lambda);
        const SpectrumResult wkb = wkb_spectrum(spec, m_max);
        const SpectrumResult orc = oracle_spectrum(spec, m_max, 1e-8);
        const ComparisonReport rep = compare_spectra(wkb, orc, 1e-6);
        VerdictRow row;
        row.family = family_name(entry.family);
        std::ostringstream ps;
        for (const auto& [k, v] : entry.params) ps << k << "=" << float17(v) << ";";
        row.params = ps.str();
        row.lambda = entry.lambda;
        row.max_rel_diff = rep.max_rel_diff;
        row.levels = (int)rep.rows.size();
        row.verdict = rep.match ? "EXACT" : (rep.max_rel_diff >= 1e-3 ? "NOT-EXACT" : "INCONCLUSIVE");
        rows.push_back(row);
    }
    return rows;
}

std::string verdict_csv(const std::vector<VerdictRow>& rows) {
    std::ostringstream s;
    s << "family,params,lambda,levels,max_rel_diff,verdict\r\n";
    for (const auto& r : rows)
        s << r.family << "," << r.params << "," << float17(r.lambda) << "," << r.levels << ","
          << float17(r.max_rel_diff) << "," << r.verdict << "\r\n";
    return s.str();
}

} // namespace swkb
