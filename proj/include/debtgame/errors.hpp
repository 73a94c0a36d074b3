#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace debtgame {

enum class ErrorKind {
    NonFinite,
    AssumptionViolation,
    Domain,
    BracketFailure,
    QuadratureFailure,
    BoundaryRegime,
    MultipleRoots,
    CapExceeded,
    PeakNotFound,
    Config,
    SimulationBudgetExceeded,
    MismatchedStreams,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// One failed inequality lhs > rhs.
struct AssumptionViolation {
    std::string name;
    double lhs;
    double rhs;
};

class ValidationError : public Error {
public:
    ValidationError(ErrorKind kind, std::vector<AssumptionViolation> violations);

    const std::vector<AssumptionViolation>& violations() const noexcept { return violations_; }

private:
    std::vector<AssumptionViolation> violations_;
};

}  // namespace debtgame
