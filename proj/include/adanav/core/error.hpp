#pragma once

#include <stdexcept>
#include <string>

namespace adanav {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateVector : Error { using Error::Error; };
struct InvalidKernel : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct BatchShapeError : Error { using Error::Error; };
struct EmptySample : Error { using Error::Error; };
struct NoNavigableViews : Error { using Error::Error; };
struct NavigableNeedsNoThreshold : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct NotADistribution : Error { using Error::Error; };
struct GenError : Error { using Error::Error; };
struct InvalidEpisode : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct PolicyDegenerate : Error { using Error::Error; };

// Sinkhorn iteration budget exhausted; carries the final marginal violation.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual(residual) {}
    double residual;
};

}  // namespace adanav
