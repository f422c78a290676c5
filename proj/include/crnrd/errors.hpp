#ifndef CRNRD_ERRORS_HPP
#define CRNRD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace crnrd {

enum class ErrorKind {
    NegativeConcentration,
    NonpositiveConcentration,
    NonpositiveMass,
    NoConvergence,
    NumericalFailure,
    NotAnEquilibrium,
    DegenerateKernel,
    NonpositiveGap,
    UnsupportedDomain,
    GridTooCoarse,
    NonFiniteState,
    InsufficientData,
    NonpositiveSeries,
    InvalidConfig,
};

/// Single exception type for all domain errors; `kind` identifies the failure.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::NegativeConcentration: return "NegativeConcentration";
        case ErrorKind::NonpositiveConcentration: return "NonpositiveConcentration";
        case ErrorKind::NonpositiveMass: return "NonpositiveMass";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::NumericalFailure: return "NumericalFailure";
        case ErrorKind::NotAnEquilibrium: return "NotAnEquilibrium";
        case ErrorKind::DegenerateKernel: return "DegenerateKernel";
        case ErrorKind::NonpositiveGap: return "NonpositiveGap";
        case ErrorKind::UnsupportedDomain: return "UnsupportedDomain";
        case ErrorKind::GridTooCoarse: return "GridTooCoarse";
        case ErrorKind::NonFiniteState: return "NonFiniteState";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::NonpositiveSeries: return "NonpositiveSeries";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

} // namespace crnrd

#endif
