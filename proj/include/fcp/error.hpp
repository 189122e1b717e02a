#pragma once

#include <stdexcept>
#include <string>

namespace fcp {

// Numerical failure: inadmissible contour, singular resolvent, non-finite sample.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input (ranges, dimensions, unknown keys).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace fcp
