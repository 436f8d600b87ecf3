#pragma once

#include <stdexcept>
#include <string>

namespace bandspec {

// Precondition or parameter-range violation.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical routine (quadrature, refinement, linear solve) failed to reach
// its tolerance or broke down.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exhaustive enumeration was asked to go past its configured cap.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw InvalidArgument(what);
}

}  // namespace bandspec
