#pragma once

#include <stdexcept>

namespace stochord {

/// Malformed caller input: bad spec strings, mismatched sizes, invalid parameters.
struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Arguments outside the mathematical domain of an operation (u outside (0,1), inadmissible eps).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Operation not defined for the kind of law supplied (step functions, infinite variance).
struct unsupported_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace stochord
