#pragma once

#include <stdexcept>
#include <string>

namespace adiabatic {

enum class ErrorKind {
    invalid_slope,
    invalid_argument,
    precision_exhausted,
    overflow,
    instance_too_large,
    too_many_eigenvalues,
    beyond_cap,
    rational_slope,
    divergence,
    parse,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; the kind selects CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace adiabatic
