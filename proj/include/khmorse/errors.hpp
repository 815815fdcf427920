/*
 * errors.hpp
 *
 * Exception types shared by the library.  Each kind maps onto one of the
 * command-line exit codes, so a front end can translate a caught error
 * without inspecting its message.
 */
#ifndef KHMORSE_ERRORS_HPP
#define KHMORSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace khmorse
{

enum class ErrorKind
{
    parse = 2,
    budget = 3,
    invariant = 4
};

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, std::string code, const std::string& what)
        : std::runtime_error(what), kind_(kind), code_(std::move(code))
    {
    }

    ErrorKind kind() const { return kind_; }
    const std::string& code() const { return code_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
    std::string code_;
};

// Malformed user input: braid text, diagram JSON, out-of-range strand index.
class ParseError : public Error
{
public:
    explicit ParseError(const std::string& what, std::string code = "parse_error")
        : Error(ErrorKind::parse, std::move(code), what)
    {
    }
};

// A computation would exceed the configured size budget.
class BudgetExceeded : public Error
{
public:
    explicit BudgetExceeded(const std::string& what)
        : Error(ErrorKind::budget, "budget_exceeded", what)
    {
    }
};

// Violated precondition or internal consistency check (d*d != 0,
// incompatible tangles, a matching that is not Morse, ...).
class InvariantViolation : public Error
{
public:
    explicit InvariantViolation(const std::string& what, std::string code = "invariant_violation")
        : Error(ErrorKind::invariant, std::move(code), what)
    {
    }
};

inline void require(bool condition, const std::string& what)
{
    if (!condition)
        throw InvariantViolation(what);
}

} // namespace khmorse

#endif
