#include "retint/error.hpp"

namespace retint {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::io: return "io";
        case ErrorKind::format: return "format";
        case ErrorKind::empty_series: return "empty_series";
        case ErrorKind::domain: return "domain";
        case ErrorKind::degenerate: return "degenerate";
        case ErrorKind::insufficient_events: return "insufficient_events";
        case ErrorKind::unreachable_target: return "unreachable_target";
        case ErrorKind::no_overlap: return "no_overlap";
        case ErrorKind::fit_failure: return "fit_failure";
        case ErrorKind::overflow: return "overflow";
        case ErrorKind::insufficient_points: return "insufficient_points";
        case ErrorKind::config: return "config";
    }
    return "unknown";
}

}  // namespace retint
