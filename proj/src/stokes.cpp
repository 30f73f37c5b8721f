#include "swkb/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "swkb/actions.hpp"
#include "swkb/errors.hpp"
#include "swkb/numeric.hpp"

namespace swkb {

namespace {

// Emanation directions: three at a simple turning point, one at a simple pole.
std::vector<double> emanation_directions(const PotentialSpec& spec, double E, const CriticalPoint& cp) {
    if (cp.kind == CritKind::TurningPoint) {
        const Cx d1 = spec.q_tilde_jet(cp.location, E).f1;
        const double psi = std::arg(d1);
        return {(kPi - psi) / 3.0, (kPi - psi + 2.0 * kPi) / 3.0, (kPi - psi + 4.0 * kPi) / 3.0};
    }
    if (cp.kind == CritKind::SimplePole) {
        // q~ ~ c/(x-y0): one Stokes direction at pi - arg c.
        Cx c(0, 0);
        const double h = 1e-5;
        for (int k = 0; k < 4; ++k) {
            const Cx dir = std::exp(Cx(0.0, 0.5 * kPi * k + 0.3));
            c += spec.q_tilde_unguarded(cp.location + h * dir, E) * (h * dir);
        }
        c /= 4.0;
        return {kPi - std::arg(c)};
    }
    fail(Errc::BadConfig, "emanation only from turning points and simple poles");
}

struct Rk45Step {
    Cx x_new;
    double err;
};

// Dormand-Prince 5(4) on dx/ds = i * conj(w)/|w|, w = branch-tracked sqrt(q~).
template <typename F>
Rk45Step dp45(F&& f, Cx x, double h) {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2;
    (void)c3;
    (void)c4;
    (void)c5;
    const Cx k1 = f(x);
    const Cx k2 = f(x + h * (a21 * k1));
    const Cx k3 = f(x + h * (a31 * k1 + a32 * k2));
    const Cx k4 = f(x + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Cx k5 = f(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Cx k6 = f(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Cx x5 = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Cx k7 = f(x5);
    const Cx err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {x5, std::abs(err)};
}

} // namespace

Polyline trace_stokes_line(const PotentialSpec& spec, double E, const CriticalPoint& start,
                           int direction_index, const Region& strip,
                           const std::vector<CriticalPoint>& capture_nodes) {
    const auto dirs = emanation_directions(spec, E, start);
    if (direction_index < 0 || direction_index >= (int)dirs.size())
        fail(Errc::BadConfig, "direction index out of range");
    const double theta = dirs[direction_index];

    Polyline line;
    line.points.push_back(start.location);

    const double r0 = 2.0 * kCaptureRadius;
    Cx x = start.location + r0 * std::exp(Cx(0.0, theta));

    // Branch reference: pick the sign that moves the tangent away from the node.
    Cx wref = std::sqrt(spec.q_tilde_unguarded(x, E));
    {
        const Cx t = Cx(0, 1) * std::conj(wref) / std::abs(wref);
        if (std::real(t * std::exp(Cx(0.0, -theta))) < 0) wref = -wref;
    }
    auto rhs = [&](Cx z) -> Cx {
        Cx w = std::sqrt(spec.q_tilde_unguarded(z, E));
        if (std::abs(w - wref) > std::abs(w + wref)) w = -w;
        return Cx(0, 1) * std::conj(w) / std::abs(w);
    };

    line.points.push_back(x);
    double s = r0;
    double h = 1e-3;
    const double tol = 1e-10;

    while (true) {
        if (s > kMaxArcLength) {
            line.terminal = TerminalKind::MaxLength;
            return line;
        }
        Rk45Step st = dp45(rhs, x, h);
        if (st.err > tol && h > 1e-10) {
            h = std::max(1e-10, 0.5 * h);
            continue;
        }
        if (h <= 1e-10) fail(Errc::TraceStalled, "step control underflow");
        const Cx x_new = st.x_new;

        // Termination on the strip boundary: walk up with shrinking steps so
        // the final chord clip stays on the line, then snap onto the rectangle.
        if (!strip.contains(x_new, 0.0)) {
            if (h > 1e-6) {
                h *= 0.5;
                continue;
            }
            Cx inside = x, outside = x_new;
            for (int it = 0; it < 60; ++it) {
                const Cx mid = 0.5 * (inside + outside);
                if (strip.contains(mid, 0.0))
                    inside = mid;
                else
                    outside = mid;
            }
            Cx hit = inside;
            const double dl = std::abs(hit.real() - strip.re_lo), dr = std::abs(hit.real() - strip.re_hi);
            const double db = std::abs(hit.imag() - strip.im_lo), dt = std::abs(hit.imag() - strip.im_hi);
            const double m = std::min(std::min(dl, dr), std::min(db, dt));
            if (m == dl) hit = Cx(strip.re_lo, hit.imag());
            else if (m == dr) hit = Cx(strip.re_hi, hit.imag());
            else if (m == db) hit = Cx(hit.real(), strip.im_lo);
            else hit = Cx(hit.real(), strip.im_hi);
            line.points.push_back(hit);
            line.terminal = TerminalKind::StripBoundary;
            return line;
        }

        x = x_new;
        {
            Cx w = std::sqrt(spec.q_tilde_unguarded(x, E));
            if (std::abs(w - wref) > std::abs(w + wref)) w = -w;
            wref = w;
        }
        s += h;
        line.points.push_back(x);

        // Capture by a critical point (including the start node after escape).
        for (size_t i = 0; i < capture_nodes.size(); ++i) {
            const Cx loc = capture_nodes[i].location;
            if (std::abs(x - loc) < kCaptureRadius) {
                const bool self = std::abs(loc - start.location) < 1e-12;
                if (self && s < 10.0 * kCaptureRadius) continue;
                line.points.push_back(loc);
                line.terminal = TerminalKind::CriticalPoint;
                line.terminal_node = (int)i;
                return line;
            }
        }
        // Double and higher poles capture incoming lines.
        if (spec.pole_distance(x) < 4.0 * kCaptureRadius) {
            int best = -1;
            double bd = 1e300;
            for (size_t i = 0; i < capture_nodes.size(); ++i) {
                const double d = std::abs(x - capture_nodes[i].location);
                if (capture_nodes[i].kind != CritKind::TurningPoint && d < bd) {
                    bd = d;
                    best = (int)i;
                }
            }
            if (best >= 0) {
                line.points.push_back(capture_nodes[best].location);
                line.terminal = TerminalKind::CriticalPoint;
                line.terminal_node = best;
                return line;
            }
        }

        if (st.err < 0.02 * tol) h = std::min(0.15, 2.0 * h);
        double dmin = 1e300;
        for (const auto& cp : capture_nodes) dmin = std::min(dmin, std::abs(x - cp.location));
        h = std::min(h, std::max(0.25 * dmin, 0.5 * kCaptureRadius));
    }
}

double re_action_along(const PotentialSpec& spec, double E, const Polyline& line) {
    std::vector<Cx> pts = line.points;
    // The invariant is measured on the line body: W is stationary at the node
    // endpoints and sqrt(q~) blows up at poles, so the capture neighbourhoods
    // are excluded from the quadrature.
    auto near_node = [&](Cx p) {
        if (spec.pole_distance(p) < 3e-2) return true;
        return std::abs(p - line.points.front()) < 5e-3 ||
               (line.terminal == TerminalKind::CriticalPoint &&
                std::abs(p - line.points.back()) < 5e-3);
    };
    while (!pts.empty() && near_node(pts.back())) pts.pop_back();
    while (!pts.empty() && near_node(pts.front())) pts.erase(pts.begin());
    if (pts.size() < 2) return 0.0;
    ActionValue av = action_along(spec, E, pts, 1e-10);
    return std::abs(std::real(av.value));
}

namespace {

struct WalkVertex {
    Cx pos;
    std::vector<int> out; // half-edge ids, sorted by angle later
};

struct HalfEdge {
    int from, to;
    int twin;
    int curve_id;    // index into merged curve list; -1 for boundary
    double angle;    // outgoing tangent angle at `from`
    std::vector<Cx> pts; // oriented geometry
    int next = -1;
    bool visited = false;
};

double poly_signed_area(const std::vector<Cx>& p) {
    double a = 0;
    for (size_t i = 0; i + 1 < p.size(); ++i)
        a += (p[i].real() * p[i + 1].imag() - p[i + 1].real() * p[i].imag());
    return 0.5 * a;
}

bool point_in_poly(const std::vector<Cx>& poly, Cx z) {
    // Winding number by angle accumulation (robust enough away from edges).
    double w = 0;
    for (size_t i = 0; i + 1 < poly.size(); ++i) {
        const Cx a = poly[i] - z, b = poly[i + 1] - z;
        w += std::arg(b / a);
    }
    return std::abs(w) > kPi;
}

} // namespace

StokesGraph build_stokes_graph(const PotentialSpec& spec, double E) {
    StokesGraph g;
    g.energy = E;
    g.family = family_name(spec.family);
    g.strip = spec.basic_strip(E);

    // Nodes: turning points, then poles inside the strip.
    for (auto cp : find_turning_points(spec, E, g.strip)) g.nodes.push_back(cp);
    const size_t n_tp = g.nodes.size();
    for (auto cp : classify_singularities(spec)) {
        if (cp.kind == CritKind::InfinityPoint) continue;
        if (!g.strip.contains(cp.location, 1e-9)) continue;
        g.nodes.push_back(cp);
    }

    // Trace all emanating lines.
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        const auto& cp = g.nodes[i];
        int ndir = 0;
        if (cp.kind == CritKind::TurningPoint)
            ndir = 3;
        else if (cp.kind == CritKind::SimplePole)
            ndir = 1;
        for (int d = 0; d < ndir; ++d) {
            StokesEdge e;
            e.start_node = (int)i;
            e.direction_index = d;
            e.line = trace_stokes_line(spec, E, cp, d, g.strip, g.nodes);
            g.edges.push_back(std::move(e));
        }
    }

    // Merge geometric duplicates (a node-to-node line traced from both ends).
    for (size_t i = 0; i < g.edges.size(); ++i) {
        auto& ei = g.edges[i];
        if (ei.merged_with >= 0 || ei.line.terminal != TerminalKind::CriticalPoint) continue;
        for (size_t j = i + 1; j < g.edges.size(); ++j) {
            auto& ej = g.edges[j];
            if (ej.merged_with >= 0 || ej.line.terminal != TerminalKind::CriticalPoint) continue;
            if (ej.start_node != ei.line.terminal_node || ej.line.terminal_node != ei.start_node) continue;
            // Distance from the midpoint of one polyline to the other curve.
            const Cx mi = ei.line.points[ei.line.points.size() / 2];
            double dm = 1e300;
            for (size_t k = 0; k + 1 < ej.line.points.size(); ++k) {
                const Cx a = ej.line.points[k], b = ej.line.points[k + 1];
                const Cx ab = b - a;
                const double len2 = std::norm(ab);
                double t = len2 > 0 ? std::clamp((std::conj(ab) * (mi - a)).real() / len2, 0.0, 1.0) : 0.0;
                dm = std::min(dm, std::abs(mi - (a + t * ab)));
            }
            if (dm < 1e-3) {
                ej.merged_with = (int)i;
                break;
            }
        }
    }

    // ---------------- planar face walk ----------------
    std::vector<WalkVertex> verts;
    auto vertex_at = [&](Cx p) -> int {
        for (size_t i = 0; i < verts.size(); ++i)
            if (std::abs(verts[i].pos - p) < 1e-7) return (int)i;
        verts.push_back({p, {}});
        return (int)verts.size() - 1;
    };
    for (const auto& nd : g.nodes) vertex_at(nd.location);

    std::vector<HalfEdge> hes;
    auto add_curve = [&](const std::vector<Cx>& pts, int curve_id) {
        const int u = vertex_at(pts.front());
        const int v = vertex_at(pts.back());
        HalfEdge h1, h2;
        h1.from = u;
        h1.to = v;
        h1.curve_id = curve_id;
        h1.pts = pts;
        std::vector<Cx> rev(pts.rbegin(), pts.rend());
        h2.from = v;
        h2.to = u;
        h2.curve_id = curve_id;
        h2.pts = rev;
        const int i1 = (int)hes.size();
        hes.push_back(h1);
        hes.push_back(h2);
        hes[i1].twin = i1 + 1;
        hes[i1 + 1].twin = i1;
    };

    // Curve geometry for the walk: unique traced edges; boundary hits become
    // vertices on the rectangle.
    std::vector<int> curve_edge_id;
    for (size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        if (e.merged_with >= 0) continue;
        if (e.line.points.size() < 2) continue;
        if (e.line.terminal == TerminalKind::MaxLength) continue; // dangling: not a face boundary
        add_curve(e.line.points, (int)curve_edge_id.size());
        curve_edge_id.push_back((int)i);
    }

    // Boundary polygon split at hit vertices and corners.
    {
        const Region& R = g.strip;
        std::vector<Cx> corners = {Cx(R.re_lo, R.im_lo), Cx(R.re_hi, R.im_lo), Cx(R.re_hi, R.im_hi),
                                   Cx(R.re_lo, R.im_hi)};
        for (const auto& c : corners) vertex_at(c);
        // Collect boundary vertices per side, sort along the side, link segments.
        auto on_side = [&](Cx p, int side) {
            switch (side) {
                case 0: return std::abs(p.imag() - R.im_lo) < 1e-9; // bottom
                case 1: return std::abs(p.real() - R.re_hi) < 1e-9; // right
                case 2: return std::abs(p.imag() - R.im_hi) < 1e-9; // top
                default: return std::abs(p.real() - R.re_lo) < 1e-9; // left
            }
        };
        for (int side = 0; side < 4; ++side) {
            std::vector<int> ids;
            for (size_t i = 0; i < verts.size(); ++i)
                if (on_side(verts[i].pos, side)) ids.push_back((int)i);
            std::sort(ids.begin(), ids.end(), [&](int a, int b) {
                const Cx pa = verts[a].pos, pb = verts[b].pos;
                switch (side) {
                    case 0: return pa.real() < pb.real();
                    case 1: return pa.imag() < pb.imag();
                    case 2: return pa.real() > pb.real();
                    default: return pa.imag() > pb.imag();
                }
            });
            for (size_t k = 0; k + 1 < ids.size(); ++k) {
                if (ids[k] == ids[k + 1]) continue;
                add_curve({verts[ids[k]].pos, verts[ids[k + 1]].pos}, -1);
            }
        }
    }

    // Outgoing angle of each half-edge; register at vertices.
    for (size_t i = 0; i < hes.size(); ++i) {
        auto& h = hes[i];
        Cx d(0, 0);
        for (size_t k = 1; k < h.pts.size(); ++k) {
            d = h.pts[k] - h.pts[0];
            if (std::abs(d) > 1e-7) break;
        }
        h.angle = std::arg(d);
        verts[h.from].out.push_back((int)i);
    }
    for (auto& v : verts)
        std::sort(v.out.begin(), v.out.end(), [&](int a, int b) { return hes[a].angle < hes[b].angle; });

    // next(h): at head(h), the half-edge preceding twin(h) in CCW order.
    for (size_t i = 0; i < hes.size(); ++i) {
        const int tw = hes[i].twin;
        const auto& out = verts[hes[i].to].out;
        int pos = -1;
        for (size_t k = 0; k < out.size(); ++k)
            if (out[k] == tw) pos = (int)k;
        if (pos < 0) fail(Errc::SectorAmbiguous, "inconsistent rotation system");
        hes[i].next = out[(pos + out.size() - 1) % out.size()];
    }

    // Collect faces.
    std::vector<std::vector<int>> faces;
    for (size_t i = 0; i < hes.size(); ++i) {
        if (hes[i].visited) continue;
        std::vector<int> orbit;
        int cur = (int)i;
        for (int guard = 0; guard < (int)hes.size() + 2; ++guard) {
            if (hes[cur].visited) break;
            hes[cur].visited = true;
            orbit.push_back(cur);
            cur = hes[cur].next;
            if (cur == (int)i) break;
        }
        faces.push_back(orbit);
    }

    if (std::getenv("SWKB_DEBUG_FACES")) {
        std::fprintf(stderr, "verts=%zu halfedges=%zu faces=%zu\n", verts.size(), hes.size(), faces.size());
        for (const auto& orbit : faces) {
            std::vector<Cx> poly;
            for (int hid : orbit)
                for (size_t k = 0; k + 1 < hes[hid].pts.size(); ++k) poly.push_back(hes[hid].pts[k]);
            if (!poly.empty()) poly.push_back(poly.front());
            int curves = 0;
            for (int hid : orbit) curves += hes[hid].curve_id >= 0;
            std::fprintf(stderr, "  orbit size=%zu curves=%d area=%.3f:", orbit.size(), curves,
                         poly_signed_area(poly));
            for (int hid : orbit)
                std::fprintf(stderr, " (%.2f,%.2f)->(%.2f,%.2f)%s", hes[hid].pts.front().real(),
                             hes[hid].pts.front().imag(), hes[hid].pts.back().real(),
                             hes[hid].pts.back().imag(), hes[hid].curve_id >= 0 ? "c" : "b");
            std::fprintf(stderr, "\n");
        }
    }
    for (const auto& orbit : faces) {
        std::vector<Cx> poly;
        for (int hid : orbit)
            for (size_t k = 0; k + 1 < hes[hid].pts.size(); ++k) poly.push_back(hes[hid].pts[k]);
        if (!poly.empty()) poly.push_back(poly.front());
        if (poly_signed_area(poly) <= 0) continue; // outer face

        StokesSector sec;
        sec.boundary = poly;
        for (int hid : orbit) {
            const auto& h = hes[hid];
            if (h.curve_id >= 0) {
                const int eid = curve_edge_id[h.curve_id];
                if (std::find(sec.edge_ids.begin(), sec.edge_ids.end(), eid) == sec.edge_ids.end())
                    sec.edge_ids.push_back(eid);
            } else {
                // Boundary contact: genuinely infinite sides, or periodic edges
                // continuing into the neighbouring strip copy. Open either way.
                sec.touches_infinity = true;
            }
        }
        for (size_t i = n_tp; i < g.nodes.size(); ++i) {
            // Pole strictly inside the face (not a boundary vertex of it).
            const Cx p = g.nodes[i].location;
            bool on_boundary = false;
            for (const auto& q : poly)
                if (std::abs(q - p) < 1e-6) on_boundary = true;
            if (!on_boundary && point_in_poly(poly, p)) sec.pole_ids.push_back((int)i);
        }
        if (!sec.touches_infinity && sec.pole_ids.empty())
            fail(Errc::SectorAmbiguous, "face without any infinity point");
        if (sec.pole_ids.size() >= 2)
            fail(Errc::SectorAmbiguous, "face with multiple finite infinity points");
        g.sectors.push_back(std::move(sec));
    }
    return g;
}

std::string topology_fingerprint(const StokesGraph& g) {
    std::map<std::string, int> nodes, edges, sectors;
    auto kind_name = [](CritKind k) {
        switch (k) {
            case CritKind::TurningPoint: return "tp";
            case CritKind::SimplePole: return "sp";
            case CritKind::DoublePole: return "dp";
            case CritKind::HigherPole: return "hp";
            default: return "inf";
        }
    };
    for (const auto& n : g.nodes) nodes[kind_name(n.kind)]++;
    for (const auto& e : g.edges) {
        std::string key = kind_name(g.nodes[e.start_node].kind);
        key += "->";
        if (e.line.terminal == TerminalKind::CriticalPoint)
            key += kind_name(g.nodes[e.line.terminal_node].kind);
        else if (e.line.terminal == TerminalKind::StripBoundary)
            key += "boundary";
        else
            key += "open";
        edges[key]++;
    }
    for (const auto& s : g.sectors) {
        std::ostringstream k;
        k << "edges=" << s.edge_ids.size() << (s.touches_infinity ? ",open" : ",closed")
          << ",poles=" << s.pole_ids.size();
        sectors[k.str()]++;
    }
    std::ostringstream out;
    out << "nodes{";
    for (const auto& [k, v] : nodes) out << k << ":" << v << ";";
    out << "} edges{";
    for (const auto& [k, v] : edges) out << k << ":" << v << ";";
    out << "} sectors[" << g.sectors.size() << "]{";
    for (const auto& [k, v] : sectors) out << k << ":" << v << ";";
    out << "}";
    return out.str();
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v + 0.0); // normalize -0
    return buf;
}

} // namespace

std::string emit_svg(const StokesGraph& g, const SvgStyle& style) {
    const Region& R = g.strip;
    const double w = style.width;
    const double pad = 24.0;
    const double sx = (w - 2 * pad) / (R.re_hi - R.re_lo);
    const double hgt = (R.im_hi - R.im_lo) * sx + 2 * pad;
    auto X = [&](double x) { return pad + (x - R.re_lo) * sx; };
    auto Y = [&](double y) { return hgt - pad - (y - R.im_lo) * sx; };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\"" << fmt(hgt)
      << "\" viewBox=\"0 0 " << fmt(w) << " " << fmt(hgt) << "\">\n";
    s << "<rect x=\"" << fmt(pad) << "\" y=\"" << fmt(pad) << "\" width=\"" << fmt(w - 2 * pad)
      << "\" height=\"" << fmt(hgt - 2 * pad) << "\" fill=\"white\" stroke=\"#444\"/>\n";
    // Axes.
    if (R.re_lo < 0 && R.re_hi > 0)
        s << "<line x1=\"" << fmt(X(0)) << "\" y1=\"" << fmt(Y(R.im_lo)) << "\" x2=\"" << fmt(X(0))
          << "\" y2=\"" << fmt(Y(R.im_hi)) << "\" stroke=\"#ccc\"/>\n";
    if (R.im_lo < 0 && R.im_hi > 0)
        s << "<line x1=\"" << fmt(X(R.re_lo)) << "\" y1=\"" << fmt(Y(0)) << "\" x2=\"" << fmt(X(R.re_hi))
          << "\" y2=\"" << fmt(Y(0)) << "\" stroke=\"#ccc\"/>\n";

    for (const auto& e : g.edges) {
        if (e.merged_with >= 0) continue;
        s << "<path d=\"";
        const auto& p = e.line.points;
        for (size_t i = 0; i < p.size(); ++i)
            s << (i == 0 ? "M" : "L") << fmt(X(p[i].real())) << " " << fmt(Y(p[i].imag()));
        s << "\" fill=\"none\" stroke=\"#1650a0\" stroke-width=\"1.4\"/>\n";
    }

    for (const auto& n : g.nodes) {
        const double cx = X(n.location.real()), cy = Y(n.location.imag());
        switch (n.kind) {
            case CritKind::TurningPoint:
                s << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy)
                  << "\" r=\"3.2\" fill=\"#b02020\"/>\n";
                break;
            case CritKind::SimplePole:
                s << "<path d=\"M" << fmt(cx - 3.2) << " " << fmt(cy - 3.2) << "L" << fmt(cx + 3.2) << " "
                  << fmt(cy + 3.2) << "M" << fmt(cx - 3.2) << " " << fmt(cy + 3.2) << "L" << fmt(cx + 3.2)
                  << " " << fmt(cy - 3.2) << "\" stroke=\"#107030\" stroke-width=\"1.5\"/>\n";
                break;
            default: {
                s << "<rect x=\"" << fmt(cx - 2.8) << "\" y=\"" << fmt(cy - 2.8)
                  << "\" width=\"5.6\" height=\"5.6\" fill=\"none\" stroke=\"#703010\"/>\n";
                if (n.kind == CritKind::HigherPole && n.order > 2) {
                    // Rule: n-2 asymptotic tangency directions, marked as ticks.
                    for (int k = 0; k < n.order - 2; ++k) {
                        const double th = (kPi + 2.0 * kPi * k) / (n.order - 2);
                        s << "<line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(cy) << "\" x2=\""
                          << fmt(cx + 9.0 * std::cos(th)) << "\" y2=\"" << fmt(cy - 9.0 * std::sin(th))
                          << "\" stroke=\"#703010\" stroke-width=\"0.8\"/>\n";
                    }
                }
                // Cut marker: a short wavy stroke from the pole, figure style.
                s << "<path d=\"M" << fmt(cx) << " " << fmt(cy);
                for (int k = 1; k <= 4; ++k)
                    s << "Q" << fmt(cx + 4.0 * k - 2.0) << " " << fmt(cy + (k % 2 ? -4.0 : 4.0)) << " "
                      << fmt(cx + 4.0 * k) << " " << fmt(cy);
                s << "\" fill=\"none\" stroke=\"#703010\" stroke-width=\"0.8\"/>\n";
                break;
            }
        }
    }

    if (style.label_sectors) {
        for (size_t i = 0; i < g.sectors.size(); ++i) {
            const auto& b = g.sectors[i].boundary;
            if (b.empty()) continue;
            Cx c(0, 0);
            for (const auto& p : b) c += p;
            c /= (double)b.size();
            s << "<text x=\"" << fmt(X(c.real())) << "\" y=\"" << fmt(Y(c.imag()))
              << "\" font-size=\"12\" fill=\"#555\">S" << i << "</text>\n";
        }
    }
    s << "</svg>\n";
    return s.str();
}

std::string graph_to_json(const StokesGraph& g) {
    std::ostringstream s;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
        return std::string(buf);
    };
    s << "{\n  \"family\": \"" << g.family << "\",\n  \"energy\": " << num(g.energy) << ",\n";
    s << "  \"strip\": [" << num(g.strip.re_lo) << ", " << num(g.strip.re_hi) << ", " << num(g.strip.im_lo)
      << ", " << num(g.strip.im_hi) << "],\n";
    s << "  \"nodes\": [";
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        const auto& n = g.nodes[i];
        const char* k = n.kind == CritKind::TurningPoint ? "turning-point"
                        : n.kind == CritKind::SimplePole ? "simple-pole"
                        : n.kind == CritKind::DoublePole ? "double-pole"
                        : n.kind == CritKind::HigherPole ? "higher-pole"
                                                         : "infinity";
        s << (i ? ", " : "") << "{\"kind\": \"" << k << "\", \"x\": [" << num(n.location.real()) << ", "
          << num(n.location.imag()) << "], \"strip_index\": " << n.strip_index << "}";
    }
    s << "],\n  \"edges\": [";
    for (size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        s << (i ? ", " : "") << "{\"start\": " << e.start_node << ", \"direction\": " << e.direction_index
          << ", \"terminal\": \""
          << (e.line.terminal == TerminalKind::CriticalPoint
                  ? "critical-point"
                  : (e.line.terminal == TerminalKind::StripBoundary ? "strip-boundary" : "max-length"))
          << "\", \"points\": [";
        for (size_t k = 0; k < e.line.points.size(); ++k)
            s << (k ? ", " : "") << "[" << num(e.line.points[k].real()) << ", "
              << num(e.line.points[k].imag()) << "]";
        s << "]}";
    }
    s << "],\n  \"sectors\": [";
    for (size_t i = 0; i < g.sectors.size(); ++i) {
        const auto& sec = g.sectors[i];
        s << (i ? ", " : "") << "{\"edges\": [";
        for (size_t k = 0; k < sec.edge_ids.size(); ++k) s << (k ? ", " : "") << sec.edge_ids[k];
        s << "], \"open\": " << (sec.touches_infinity ? "true" : "false") << ", \"poles\": [";
        for (size_t k = 0; k < sec.pole_ids.size(); ++k) s << (k ? ", " : "") << sec.pole_ids[k];
        s << "]}";
    }
    s << "]\n}\n";
    return s.str();
}

} // namespace swkb
