#pragma once

#include <stdexcept>
#include <string>

namespace lceit {

// Operand shapes do not agree (matrix sizes, truncation below minimum).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A physical or numerical argument lies outside the range where the formula holds.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The integrator produced non-finite values or was asked to run with an unsafe step.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Reading or writing a file failed; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lceit
