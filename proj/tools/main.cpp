// stokeswkb: semiclassical quantization toolkit CLI.
//
// Subcommands: spectrum | compare | stokes | phase-audit | susy-verify |
// verdict-table. Outputs are deterministic (17 significant digits) and written
// atomically. Exit codes: 0 success, 1 error, 2 asserted MATCH failed.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swkb/actions.hpp"
#include "swkb/numeric.hpp"
#include "swkb/errors.hpp"
#include "swkb/oracle.hpp"
#include "swkb/phase.hpp"
#include "swkb/potentials.hpp"
#include "swkb/quantize.hpp"
#include "swkb/report.hpp"
#include "swkb/stokes.hpp"
#include "swkb/susy.hpp"

using namespace swkb;

namespace {

struct CommonOpts {
    std::string family;
    std::vector<std::string> params; // key=value
    double lambda = 1.0;
    std::string config_path;
};

std::map<std::string, double> parse_params(const std::vector<std::string>& kv) {
    std::map<std::string, double> out;
    for (const auto& s : kv) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(Errc::BadConfig, "expected key=value, got '" + s + "'");
        out[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    }
    return out;
}

// Flags override config-file values.
void merge_config(CommonOpts& c, std::map<std::string, double>& params) {
    if (c.config_path.empty()) return;
    std::ifstream f(c.config_path);
    if (!f) fail(Errc::BadConfig, "cannot read config " + c.config_path);
    std::stringstream ss;
    ss << f.rdbuf();
    nlohmann::json j = nlohmann::json::parse(ss.str());
    if (j.contains("family") && c.family.empty()) c.family = j["family"].get<std::string>();
    if (j.contains("lambda") && c.lambda == 1.0) c.lambda = j["lambda"].get<double>();
    if (j.contains("params")) {
        for (auto& [k, v] : j["params"].items())
            if (!params.count(k)) params[k] = v.get<double>();
    }
}

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        atomic_write(path, content);
}

std::map<std::string, double> susy_default_params(int family, SusyCase c) {
    switch (family) {
        case 1: return {{"alpha", 1.0}, {"beta", 6.0}};
        case 2: return {{"alpha", 2.0}, {"l", 1.0}};
        case 3: return {{"alpha", 1.0}, {"l", 1.0}};
        case 4: return {{"alpha", 0.4}, {"l", 5.0}};
        case 5: return {{"alpha", -10.0}, {"l", 5.0}};
        case 6: return {{"l", 6.0}, {"lp", 1.0}};
        case 7: return {{"l", 3.0}};
        case 8: return {{"l", 2.0}, {"lp", 1.0}};
        case 9: return {{"l", 3.0}, {"lp", 1.0}};
        case 10: return {{"l", 3.0}, {"b", c == SusyCase::Broken4 ? -1.5 : 1.5}};
    }
    fail(Errc::BadConfig, "susy family 1..10");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stokeswkb: Stokes graphs, JWKB/SWKB spectra and an independent grid oracle"};
    app.require_subcommand(1);

    // ------------------------------------------------------------- spectrum
    auto* sp = app.add_subcommand("spectrum", "energy levels by jwkb | swkb | oracle");
    CommonOpts sc;
    std::string sp_method = "jwkb", sp_out;
    int sp_mmax = 5;
    int sp_susy_family = 0, sp_susy_case = 1;
    double sp_alpha = 0, sp_beta = 0, sp_gamma = 0;
    bool has_alpha = false, has_beta = false, has_gamma = false;
    double sp_tol = 1e-8;
    sp->add_option("--family", sc.family, "potential family name");
    sp->add_option("--lambda", sc.lambda, "large parameter lambda");
    sp->add_option("--m-max", sp_mmax, "highest level index");
    sp->add_option("--method", sp_method, "jwkb | swkb | oracle");
    sp->add_option("--param,-p", sc.params, "named parameter key=value (repeatable)");
    sp->add_option("--alpha", sp_alpha)->each([&](const std::string&) { has_alpha = true; });
    sp->add_option("--beta", sp_beta)->each([&](const std::string&) { has_beta = true; });
    sp->add_option("--gamma", sp_gamma)->each([&](const std::string&) { has_gamma = true; });
    sp->add_option("--susy-family", sp_susy_family, "superpotential family 1..10 (method swkb)");
    sp->add_option("--susy-case", sp_susy_case, "catalog case 1..4 (method swkb)");
    sp->add_option("--tol", sp_tol, "oracle tolerance");
    sp->add_option("--out", sp_out, "CSV output path");
    sp->add_option("--config", sc.config_path, "JSON config (flags override)");

    // -------------------------------------------------------------- compare
    auto* cp = app.add_subcommand("compare", "per-level diff of two methods");
    CommonOpts cc;
    std::string cp_a = "jwkb", cp_b = "oracle", cp_out, cp_json;
    int cp_mmax = 5;
    double cp_tol = 1e-6;
    bool cp_assert = false;
    cp->add_option("--family", cc.family)->required();
    cp->add_option("--lambda", cc.lambda);
    cp->add_option("--m-max", cp_mmax);
    cp->add_option("--method-a", cp_a);
    cp->add_option("--method-b", cp_b);
    cp->add_option("--tol", cp_tol);
    cp->add_option("--param,-p", cc.params);
    cp->add_flag("--assert-match", cp_assert, "exit 2 on MISMATCH");
    cp->add_option("--out", cp_out, "CSV output path");
    cp->add_option("--json", cp_json, "JSON output path");

    // --------------------------------------------------------------- stokes
    auto* st = app.add_subcommand("stokes", "trace the Stokes graph");
    CommonOpts stc;
    double st_energy = 1.0;
    std::string st_svg, st_json;
    int st_strip = 1;
    st->add_option("--family", stc.family)->required();
    st->add_option("--lambda", stc.lambda);
    st->add_option("--energy", st_energy)->required();
    st->add_option("--param,-p", stc.params);
    st->add_option("--svg", st_svg, "SVG output path");
    st->add_option("--json", st_json, "graph JSON output path");
    st->add_option("--strip", st_strip, "period copies rendered");

    // ---------------------------------------------------------- phase-audit
    auto* ph = app.add_subcommand("phase-audit", "Appendix-style strip phase difference");
    CommonOpts phc;
    double ph_energy = 0.0, ph_x0 = 4.0;
    int ph_pairs = 64;
    std::string ph_json;
    ph->add_option("--family", phc.family)->required();
    ph->add_option("--lambda", phc.lambda);
    ph->add_option("--energy", ph_energy)->required();
    ph->add_option("--x0", ph_x0, "real part of the evaluation point");
    ph->add_option("--pairs", ph_pairs, "root pairs per base root");
    ph->add_option("--param,-p", phc.params);
    ph->add_option("--json", ph_json, "output path");

    // ---------------------------------------------------------- susy-verify
    auto* sv = app.add_subcommand("susy-verify", "per-family SUSY verdicts");
    std::string sv_family = "all", sv_json;
    double sv_lambda = 1.0;
    int sv_mmax = 4;
    sv->add_option("--family", sv_family, "1..10 or 'all'");
    sv->add_option("--lambda", sv_lambda);
    sv->add_option("--m-max", sv_mmax);
    sv->add_option("--json", sv_json, "output path");

    // --------------------------------------------------------- verdict-table
    auto* vt = app.add_subcommand("verdict-table", "EXACT / NOT-EXACT verdict per catalog family");
    std::string vt_out;
    int vt_mmax = 5;
    vt->add_option("--out", vt_out, "CSV output path");
    vt->add_option("--m-max", vt_mmax);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sp->parsed()) {
            auto params = parse_params(sc.params);
            if (has_alpha) params["alpha"] = sp_alpha;
            if (has_beta) params["beta"] = sp_beta;
            if (has_gamma) params["gamma"] = sp_gamma;
            merge_config(sc, params);
            if (sp_method == "swkb") {
                if (sp_susy_family < 1) fail(Errc::BadConfig, "--susy-family required for swkb");
                std::map<std::string, double> sparams =
                    params.empty() ? susy_default_params(sp_susy_family, (SusyCase)sp_susy_case) : params;
                Superpotential phi =
                    superpotential(sp_susy_family, (SusyCase)sp_susy_case, sparams, sc.lambda);
                SpectrumResult r = swkb_spectrum(phi, sp_mmax);
                write_or_print(sp_out, spectrum_csv(r, phi.partner));
            } else {
                if (sc.family.empty()) fail(Errc::BadConfig, "--family required");
                PotentialSpec spec = make_potential(family_from_name(sc.family), params, sc.lambda);
                SpectrumResult r = sp_method == "oracle" ? oracle_spectrum(spec, sp_mmax, sp_tol)
                                                         : wkb_spectrum(spec, sp_mmax);
                write_or_print(sp_out, spectrum_csv(r, spec));
            }
        } else if (cp->parsed()) {
            auto params = parse_params(cc.params);
            PotentialSpec spec = make_potential(family_from_name(cc.family), params, cc.lambda);
            auto run = [&](const std::string& m) {
                if (m == "oracle") return oracle_spectrum(spec, cp_mmax, 1e-8);
                if (m == "jwkb") return wkb_spectrum(spec, cp_mmax);
                fail(Errc::BadConfig, "compare methods: jwkb | oracle");
            };
            ComparisonReport rep = compare_spectra(run(cp_a), run(cp_b), cp_tol);
            if (!cp_out.empty()) write_or_print(cp_out, comparison_csv(rep, cp_a, cp_b));
            if (!cp_json.empty()) write_or_print(cp_json, comparison_json(rep, cp_a, cp_b));
            if (cp_out.empty() && cp_json.empty()) std::cout << comparison_csv(rep, cp_a, cp_b);
            if (cp_assert && !rep.match) return 2;
        } else if (st->parsed()) {
            auto params = parse_params(stc.params);
            if (stc.family == "harmonic" && params.empty()) params["alpha"] = 1.0;
            PotentialSpec spec = make_potential(family_from_name(stc.family), params, stc.lambda);
            StokesGraph g = build_stokes_graph(spec, st_energy);
            if (st_strip > 1 && spec.period != PeriodAxis::None) {
                // Render extra period copies of the traced lines: offsets
                // +1, -1, +2, -2, ... until st_strip copies are shown.
                const Cx shift = spec.period == PeriodAxis::Imag2Pi ? Cx(0, 2 * kPi) : Cx(2 * kPi, 0);
                const size_t n0 = g.edges.size();
                int lo_k = 0, hi_k = 0;
                for (int c = 1; c < st_strip; ++c) {
                    const int k = (c % 2 == 1) ? (c + 1) / 2 : -(c / 2);
                    lo_k = std::min(lo_k, k);
                    hi_k = std::max(hi_k, k);
                    for (size_t i = 0; i < n0; ++i) {
                        StokesEdge e = g.edges[i];
                        for (auto& p : e.line.points) p += double(k) * shift;
                        g.edges.push_back(e);
                    }
                }
                if (spec.period == PeriodAxis::Imag2Pi) {
                    g.strip.im_lo += 2 * kPi * lo_k;
                    g.strip.im_hi += 2 * kPi * hi_k;
                } else {
                    g.strip.re_lo += 2 * kPi * lo_k;
                    g.strip.re_hi += 2 * kPi * hi_k;
                }
            }
            if (!st_svg.empty()) write_or_print(st_svg, emit_svg(g));
            if (!st_json.empty()) write_or_print(st_json, graph_to_json(g));
            if (st_svg.empty() && st_json.empty()) std::cout << graph_to_json(g);
        } else if (ph->parsed()) {
            auto params = parse_params(phc.params);
            PotentialSpec spec = make_potential(family_from_name(phc.family), params, phc.lambda);
            PhaseAudit a = strip_phase_difference(spec, ph_energy, ph_x0, ph_pairs);
            std::ostringstream js;
            js << "{\n  \"family\": \"" << phc.family << "\",\n  \"n_roots_used\": " << a.n_roots_used
               << ",\n  \"phase_a\": " << float17(a.phase_a) << ",\n  \"phase_b\": " << float17(a.phase_b)
               << ",\n  \"difference\": " << float17(a.difference)
               << ",\n  \"difference_direct\": " << float17(a.difference_direct)
               << ",\n  \"raw_half\": " << float17(a.raw_half)
               << ",\n  \"raw_full\": " << float17(a.raw_full)
               << ",\n  \"difference_over_pi\": " << float17(a.difference / kPi)
               << ",\n  \"converged\": " << (a.converged ? "true" : "false") << "\n}\n";
            write_or_print(ph_json, js.str());
        } else if (sv->parsed()) {
            std::vector<int> fams;
            if (sv_family == "all") {
                for (int f = 1; f <= 10; ++f) fams.push_back(f);
            } else {
                fams.push_back(std::stoi(sv_family));
            }
            std::ostringstream js;
            js << "{\n  \"lambda\": " << float17(sv_lambda) << ",\n  \"families\": [\n";
            bool first_f = true;
            for (int f : fams) {
                js << (first_f ? "" : ",\n") << "    {\"family\": " << f << ", \"cases\": [";
                first_f = false;
                bool first_c = true;
                for (SusyCase c : catalog_cases(f)) {
                    Superpotential phi;
                    std::string riccati = "ok", shift, cls;
                    std::string res_minus, res_plus;
                    try {
                        phi = superpotential(f, c, susy_default_params(f, c), sv_lambda);
                        cls = susy_case_name(classify_susy_case(phi));
                        const BoundWindow w = bound_window(phi.partner);
                        const double Et = 0.35 * ((std::isfinite(w.hi) ? w.hi : w.lo + 2.0) - w.lo);
                        res_minus = float17(std::imag(f_residue_at_infinity(phi, ResidueVariant::Minus, Et)));
                        res_plus = float17(std::imag(f_residue_at_infinity(phi, ResidueVariant::Plus, Et)));
                        shift = shift_name(verify_level_shift(phi.partner, phi, sv_mmax));
                    } catch (const Error& e) {
                        riccati = e.what();
                    }
                    js << (first_c ? "" : ", ") << "{\"case\": \"" << susy_case_name(c) << "\", \"status\": \""
                       << riccati << "\"";
                    first_c = false;
                    if (riccati == "ok") {
                        js << ", \"classified\": \"" << cls << "\", \"shift\": \"" << shift
                           << "\", \"im_residue_minus\": " << res_minus
                           << ", \"im_residue_plus\": " << res_plus;
                    }
                    js << "}";
                }
                js << "]}";
            }
            js << "\n  ]\n}\n";
            write_or_print(sv_json, js.str());
        } else if (vt->parsed()) {
            write_or_print(vt_out, verdict_csv(verdict_table(vt_mmax)));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
