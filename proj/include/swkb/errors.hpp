#pragma once

#include <stdexcept>
#include <string>

namespace swkb {

enum class Errc {
    ParamOutOfRange,
    PoleHit,
    DegenerateRoot,
    UnsupportedMap,
    PathThroughPole,
    NonCanonicalPath,
    TraceStalled,
    SectorAmbiguous,
    NoBoundWindow,
    GridTooCoarse,
    EmptySpectrum,
    RiccatiMismatch,
    Indeterminate,
    NotConverged,
    NoConstantShift,
    RootTooClose,
    BadConfig,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::ParamOutOfRange:  return "PARAM_OUT_OF_RANGE";
        case Errc::PoleHit:          return "POLE_HIT";
        case Errc::DegenerateRoot:   return "DEGENERATE_ROOT";
        case Errc::UnsupportedMap:   return "UNSUPPORTED_MAP";
        case Errc::PathThroughPole:  return "PATH_THROUGH_POLE";
        case Errc::NonCanonicalPath: return "NON_CANONICAL_PATH";
        case Errc::TraceStalled:     return "TRACE_STALLED";
        case Errc::SectorAmbiguous:  return "SECTOR_AMBIGUOUS";
        case Errc::NoBoundWindow:    return "NO_BOUND_WINDOW";
        case Errc::GridTooCoarse:    return "GRID_TOO_COARSE";
        case Errc::EmptySpectrum:    return "EMPTY_SPECTRUM";
        case Errc::RiccatiMismatch:  return "RICCATI_MISMATCH";
        case Errc::Indeterminate:    return "INDETERMINATE";
        case Errc::NotConverged:     return "NOT_CONVERGED";
        case Errc::NoConstantShift:  return "NO_CONSTANT_SHIFT";
        case Errc::RootTooClose:     return "ROOT_TOO_CLOSE";
        case Errc::BadConfig:        return "BAD_CONFIG";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace swkb
