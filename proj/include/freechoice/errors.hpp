#pragma once

#include <stdexcept>
#include <string>

namespace freechoice {

/// An identity that the construction guarantees for every basis failed to
/// hold. Always an implementation bug, never bad input.
class InternalProofViolation : public std::logic_error {
public:
    explicit InternalProofViolation(const std::string &what) : std::logic_error(what) {}
};

/// Rejected user data (malformed instance, bad block, size cap exceeded).
class InputError : public std::runtime_error {
public:
    InputError(std::string code, const std::string &what) : std::runtime_error(what), code_(std::move(code)) {}

    const std::string &code() const noexcept { return code_; }

private:
    std::string code_;
};

inline void proof_check(bool condition, const std::string &what)
{
    if (! condition)
        throw InternalProofViolation(what);
}

} // namespace freechoice
