#pragma once

#include <string>
#include <vector>

#include "swkb/geometry.hpp"
#include "swkb/potentials.hpp"

namespace swkb {

inline constexpr double kCaptureRadius = 1e-4;
inline constexpr double kLineTol = 1e-6;
inline constexpr double kMaxArcLength = 50.0;

struct StokesEdge {
    int start_node = -1;
    int direction_index = 0;
    Polyline line;
    int merged_with = -1; // edge id of the geometric duplicate kept for faces
};

struct StokesSector {
    std::vector<int> edge_ids;        // bounding traced edges
    std::vector<int> pole_ids;        // infinity points inside (finite poles)
    bool touches_infinity = false;    // opens toward an infinite z_k
    std::vector<Cx> boundary;         // closed boundary polygon (for rendering)
};

struct StokesGraph {
    std::vector<CriticalPoint> nodes; // turning points first, then poles
    std::vector<StokesEdge> edges;
    std::vector<StokesSector> sectors;
    Region strip;
    double energy = 0.0;
    std::string family;
};

// Follows Re W = const = 0 from a turning point (3 directions) or simple pole
// (1 direction) by adaptive arc-length continuation until another critical
// point, the strip boundary, or the length cap.
Polyline trace_stokes_line(const PotentialSpec& spec, double E, const CriticalPoint& start,
                           int direction_index, const Region& strip,
                           const std::vector<CriticalPoint>& capture_nodes);

StokesGraph build_stokes_graph(const PotentialSpec& spec, double E);

// |Re int sqrt(q~)| accumulated along the polyline by independent quadrature.
double re_action_along(const PotentialSpec& spec, double E, const Polyline& line);

struct SvgStyle {
    double width = 720.0;
    bool label_sectors = true;
};

std::string emit_svg(const StokesGraph& graph, const SvgStyle& style = {});
std::string graph_to_json(const StokesGraph& graph);

// Coordinate-free topology summary (node kinds, edge terminal kinds, sector
// boundary sizes) for golden comparisons across lambda.
std::string topology_fingerprint(const StokesGraph& graph);

} // namespace swkb
