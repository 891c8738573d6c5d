#pragma once

#include <stdexcept>
#include <string>

namespace rap {

/// Raised when an argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the fixed-step integrator loses the unit norm of the state.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time_s, double norm)
        : std::runtime_error(what), time_s_(time_s), norm_(norm) {}

    double time_s() const { return time_s_; }
    double norm() const { return norm_; }

private:
    double time_s_;
    double norm_;
};

}  // namespace rap
