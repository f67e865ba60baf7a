#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace genkin {

// Base for everything thrown by the library. code() is a stable machine
// readable name; what() carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define GENKIN_ERROR(Name)                                            \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}  \
    }

GENKIN_ERROR(DomainError);          // argument outside a map's domain
GENKIN_ERROR(AdmissibilityError);   // kernel fails K' > 0 / monotonicity
GENKIN_ERROR(NumericalError);       // non-finite state, drift budget, no convergence
GENKIN_ERROR(SingularityError);     // trajectory entered the minimum-radius guard
GENKIN_ERROR(NotPeriodicError);     // no verified period found
GENKIN_ERROR(RangeError);           // window/tolerance outside valid range
GENKIN_ERROR(DimensionError);       // operation undefined for this dimension
GENKIN_ERROR(UnboundError);         // no bound orbit at the requested (E, L)
GENKIN_ERROR(BracketError);         // root/target not bracketed
GENKIN_ERROR(ConfigError);          // bad config field / parameter path

#undef GENKIN_ERROR

// Momentum-from-velocity map not invertible (squared-speed map not strictly
// increasing, e.g. T = A|p|).
class NonInvertibleVelocityMap : public Error {
public:
    explicit NonInvertibleVelocityMap(const std::string& msg)
        : Error("NonInvertibleVelocityMap", msg) {}
};

// More than one classically allowed well at the given (E, L); carries one
// [lo, hi] radius bracket per detected well.
class AmbiguousWellError : public Error {
public:
    AmbiguousWellError(const std::string& msg,
                       std::vector<std::pair<double, double>> wells)
        : Error("AmbiguousWellError", msg), wells_(std::move(wells)) {}
    const std::vector<std::pair<double, double>>& wells() const noexcept {
        return wells_;
    }

private:
    std::vector<std::pair<double, double>> wells_;
};

// Pointwise dominance between two Hamiltonians failed; carries the witness.
class DominanceError : public Error {
public:
    DominanceError(const std::string& msg, double where, double lhs, double rhs)
        : Error("DominanceError", msg), where_(where), lhs_(lhs), rhs_(rhs) {}
    double where() const noexcept { return where_; }  // p^2 or r at the witness
    double lhs() const noexcept { return lhs_; }
    double rhs() const noexcept { return rhs_; }

private:
    double where_, lhs_, rhs_;
};

}  // namespace genkin
