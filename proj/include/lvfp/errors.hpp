#pragma once

#include <stdexcept>
#include <string>

namespace lvfp {

// Invalid parameters, inadmissible configurations and violated preconditions
// are reported with std::domain_error. The two types below separate the
// remaining failure classes so the command-line tool can map them to exit codes.

// Malformed configuration text, unknown keys, unparsable values.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation ran but its result cannot be trusted (singular solve,
// non-convergent quadrature, invariant violation after a step).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lvfp
