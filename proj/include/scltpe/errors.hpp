#pragma once

#include <stdexcept>
#include <string>

namespace scltpe {

// Shape disagreement between operands.
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed input file; message carries line/column context.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration or parameter value.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Non-finite values where finite arithmetic is required.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace scltpe
