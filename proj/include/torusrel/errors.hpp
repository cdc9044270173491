#ifndef TORUSREL_ERRORS_HPP
#define TORUSREL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace torusrel {

// Base class for all library errors. The exit_code() of the most derived
// class is what the CLI reports to the shell.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
    virtual int exit_code() const { return 1; }
};

// Bad user input: malformed representation spec, unparsable monomial,
// invalid option values.
class config_error : public error {
public:
    explicit config_error(const std::string& msg) : error(msg) {}
    int exit_code() const override { return 1; }
};

// A Hilbert basis computation failed to stabilize within its cap.
class cone_error : public error {
public:
    explicit cone_error(const std::string& msg) : error(msg) {}
    int exit_code() const override { return 2; }
};

// An enumeration or search exceeded a configured resource cap.
class resource_cap_error : public error {
public:
    explicit resource_cap_error(const std::string& msg) : error(msg) {}
    int exit_code() const override { return 3; }
};

// Input binomial is not a relation of the invariant ring (sides are not
// invariant, or their flattenings disagree).
class not_a_relation_error : public error {
public:
    explicit not_a_relation_error(const std::string& msg) : error(msg) {}
    int exit_code() const override { return 4; }
};

// The decomposition procedure hit a state its preconditions exclude.
class decomposition_error : public error {
public:
    explicit decomposition_error(const std::string& msg) : error(msg) {}
    int exit_code() const override { return 5; }
};

// Rearrangement target was not met. Carries the best squared column norm
// the search achieved so the caller can report how far off it was.
class bound_exceeded_error : public decomposition_error {
public:
    bound_exceeded_error(const std::string& msg, long long achieved_sq)
        : decomposition_error(msg), achieved_norm_sq(achieved_sq) {}
    long long achieved_norm_sq;
};

} // namespace torusrel

#endif
