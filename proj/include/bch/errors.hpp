#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bch {

// Parameter outside the validated domain; message names the violated bound.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Root bracketing failed. For validated parameters this indicates an internal
// inconsistency, not a user error.
struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature exhausted its panel budget before meeting the tolerance.
struct ToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ODE integration failure (step-size underflow or span exhausted).
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A simulation left its validity domain (positivity, blow-up, resolution).
struct SimAbort : std::runtime_error {
    std::string reason;
    SimAbort(std::string r, const std::string& what)
        : std::runtime_error(what), reason(std::move(r)) {}
};

struct ZeroPolynomialError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace bch
