#pragma once

#include <stdexcept>
#include <string>

namespace gaugelab {

struct GridMismatch : std::runtime_error {
    explicit GridMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionUnsupported : std::runtime_error {
    explicit DimensionUnsupported(const std::string& what) : std::runtime_error(what) {}
};

struct BoundaryUnsupported : std::runtime_error {
    explicit BoundaryUnsupported(const std::string& what) : std::runtime_error(what) {}
};

struct IncompatibleSource : std::runtime_error {
    explicit IncompatibleSource(const std::string& what) : std::runtime_error(what) {}
};

struct NotNormalized : std::runtime_error {
    explicit NotNormalized(const std::string& what) : std::runtime_error(what) {}
};

struct NonPeriodicGauge : std::runtime_error {
    explicit NonPeriodicGauge(const std::string& what) : std::runtime_error(what) {}
};

struct SizeExceeded : std::runtime_error {
    explicit SizeExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

struct NotStationary : std::runtime_error {
    explicit NotStationary(const std::string& what) : std::runtime_error(what) {}
};

struct PropagationFailure : std::runtime_error {
    explicit PropagationFailure(const std::string& what) : std::runtime_error(what) {}
};

// thrown after the iteration cap; carries whatever converged so callers can
// report partial results instead of silently trusting them
struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what, int converged = 0)
        : std::runtime_error(what), converged_count(converged) {}
    int converged_count;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gaugelab
