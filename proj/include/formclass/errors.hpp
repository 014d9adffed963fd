#ifndef FORMCLASS_ERRORS_HPP
#define FORMCLASS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace formclass {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DivideByZero : Error {
    DivideByZero() : Error("division by numerically zero value") {}
};

// Carries the offending residual as a decimal string so callers can decide
// whether to retry at higher precision.
struct ResidualTooLarge : Error {
    std::string residual;
    explicit ResidualTooLarge(std::string res)
        : Error("rounding residual too large: " + res), residual(std::move(res)) {}
};

struct NonNegativeInput : Error {
    NonNegativeInput() : Error("input must be negative") {}
};

struct BadDiscriminant : Error {
    explicit BadDiscriminant(const std::string& msg = "invalid discriminant") : Error(msg) {}
};

struct DiscMismatch : Error {
    DiscMismatch() : Error("form discriminant does not match the order") {}
};

struct NotPrimeToN : Error {
    NotPrimeToN() : Error("ideal is not prime to the level") {}
};

struct AmbiguousClass : Error {
    explicit AmbiguousClass(const std::string& msg) : Error("ambiguous class: " + msg) {}
};

struct NotInLevelSet : Error {
    NotInLevelSet() : Error("form does not belong to the level set") {}
};

struct IncompatibleLevels : Error {
    IncompatibleLevels() : Error("level structures are incompatible") {}
};

struct ParityViolation : Error {
    ParityViolation() : Error("middle coefficient parity mismatch") {}
};

struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& msg = "precision cap reached") : Error(msg) {}
};

struct NotPrimitive : Error {
    explicit NotPrimitive(const std::string& msg) : Error("invariant not primitive: " + msg) {}
};

struct LeadingCoeffVanishes : Error {
    LeadingCoeffVanishes() : Error("leading coefficient vanishes modulo p") {}
};

struct PDividesD : Error {
    PDividesD() : Error("prime divides the discriminant") {}
};

// Which hypothesis of the congruence check failed.
struct ConditionViolated : Error {
    int which;  // 1, 2 or 3
    explicit ConditionViolated(int w)
        : Error("congruence condition (" + roman(w) + ") violated"), which(w) {}
    static std::string roman(int w) { return w == 1 ? "i" : (w == 2 ? "ii" : "iii"); }
};

struct ExcludedPrime : Error {
    ExcludedPrime() : Error("prime divides an excluded quantity") {}
};

struct UsageError : Error {
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

}  // namespace formclass

#endif
