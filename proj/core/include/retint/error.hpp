#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace retint {

/// Failure categories shared by every stage of the pipeline.
enum class ErrorKind {
    io,
    format,
    empty_series,
    domain,
    degenerate,
    insufficient_events,
    unreachable_target,
    no_overlap,
    fit_failure,
    overflow,
    insufficient_points,
    config,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Thrown when a threshold leaves fewer than two usable exceedances.
class InsufficientEventsError : public Error {
public:
    InsufficientEventsError(std::size_t exceedances, const std::string& what)
        : Error(ErrorKind::insufficient_events, what), exceedances_(exceedances) {}

    [[nodiscard]] std::size_t exceedances() const noexcept { return exceedances_; }

private:
    std::size_t exceedances_;
};

/// Thrown when a moment order is too large to evaluate in double precision.
class OverflowError : public Error {
public:
    OverflowError(double max_safe_order, const std::string& what)
        : Error(ErrorKind::overflow, what), max_safe_order_(max_safe_order) {}

    [[nodiscard]] double max_safe_order() const noexcept { return max_safe_order_; }

private:
    double max_safe_order_;
};

}  // namespace retint
