#pragma once

#include <stdexcept>
#include <string>

namespace mgsim {

/// Invalid or inconsistent scenario/config parameters.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A simulation state left the sane range (|x| > 1e9 or non-finite).
class NumericalDivergence : public std::runtime_error {
public:
    NumericalDivergence(const std::string& what, double t_fail)
        : std::runtime_error(what), t_fail_(t_fail) {}
    double time_of_failure() const { return t_fail_; }

private:
    double t_fail_;
};

/// Analysis window is not an integer number of samples or does not fit.
class WindowError : public std::runtime_error {
public:
    explicit WindowError(const std::string& what) : std::runtime_error(what) {}
};

/// Signal has no usable fundamental (amplitude below noise floor).
class DegenerateError : public std::runtime_error {
public:
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mgsim
