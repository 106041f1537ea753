#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace maxstop {

enum class ErrorKind {
    parse,
    domain,
    argument,
    range,
    unsupported,
    divergence,
    numeric,
    infinite_payoff,
    no_interior_max,
    reliability,
    simulation,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Process exit code used by the CLI for each error kind.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::parse: return "PARSE_ERROR";
        case ErrorKind::domain: return "DOMAIN_ERROR";
        case ErrorKind::argument: return "ARGUMENT_ERROR";
        case ErrorKind::range: return "RANGE_ERROR";
        case ErrorKind::unsupported: return "UNSUPPORTED";
        case ErrorKind::divergence: return "DIVERGENCE";
        case ErrorKind::numeric: return "NUMERIC_FAILURE";
        case ErrorKind::infinite_payoff: return "INFINITE_PAYOFF";
        case ErrorKind::no_interior_max: return "NO_INTERIOR_MAX";
        case ErrorKind::reliability: return "RELIABILITY_ERROR";
        case ErrorKind::simulation: return "SIMULATION_ERROR";
    }
    return "UNKNOWN";
}

inline int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::parse: return 2;
        case ErrorKind::domain:
        case ErrorKind::argument:
        case ErrorKind::range:
        case ErrorKind::unsupported: return 3;
        default: return 4;
    }
}

}  // namespace maxstop
