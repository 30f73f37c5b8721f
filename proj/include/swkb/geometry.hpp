#pragma once

#include <complex>
#include <vector>

namespace swkb {

using Cx = std::complex<double>;

enum class TerminalKind { CriticalPoint, StripBoundary, MaxLength };

struct Polyline {
    std::vector<Cx> points;
    TerminalKind terminal = TerminalKind::MaxLength;
    int terminal_node = -1; // node id when terminal == CriticalPoint

    double arc_length() const {
        double s = 0;
        for (size_t i = 0; i + 1 < points.size(); ++i) s += std::abs(points[i + 1] - points[i]);
        return s;
    }
};

} // namespace swkb
