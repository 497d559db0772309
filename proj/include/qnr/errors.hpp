#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qnr {

/// A caller broke an operation's contract (bad modulus, parameter out of range).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A request would exceed the configured resource budget.
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& what, std::uint64_t required, std::uint64_t available)
        : std::runtime_error(what), required_(required), available_(available) {}

    std::uint64_t required() const noexcept { return required_; }
    std::uint64_t available() const noexcept { return available_; }

private:
    std::uint64_t required_;
    std::uint64_t available_;
};

/// A mathematical claim the tool checks turned out false (or could not be
/// established). Distinct from contract violations: this is a result.
class VerificationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qnr
