#pragma once

#include <stdexcept>
#include <string>

namespace bogdyn {

// Bad user-facing configuration (CLI exit code 2).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested Fock space exceeds the memory cap (CLI exit code 3).
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// NaN/overflow or non-convergence during time stepping (CLI exit code 4).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// A caller violated an operation's precondition.
class contract_error : public std::logic_error {
public:
    explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace bogdyn
