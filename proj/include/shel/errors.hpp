#pragma once

#include <stdexcept>
#include <string>

namespace shel {

// A physical or structural invariant was violated by the caller's input.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical evaluation produced a non-finite or degenerate value.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Reading or writing a file failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace shel
