#pragma once
#include <stdexcept>
#include <string>

namespace eqcavity {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// invalid numeric/structural parameters (maps to CLI exit 2)
struct InvalidParameterError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// regime gates (map to CLI exit 3)
struct InvalidSourceError : Error { using Error::Error; };
struct UnsupportedRegimeError : Error { using Error::Error; };

struct SourceSingularityError : Error { using Error::Error; };
struct CoincidentPointsError : Error { using Error::Error; };
struct DegenerateRegionError : Error { using Error::Error; };
struct OriginOnBoundaryError : Error { using Error::Error; };
struct AlphaOutsideError : Error { using Error::Error; };
struct NewtonDivergenceError : Error { using Error::Error; };
struct SingularFitError : Error { using Error::Error; };

// integration gave up; carries the best value seen and its error estimate
struct ToleranceNotMetError : Error {
    double value;
    double estimate;
    ToleranceNotMetError(const std::string& msg, double v, double e)
        : Error(msg), value(v), estimate(e) {}
};

} // namespace eqcavity
