#pragma once

#include <stdexcept>
#include <string>

namespace subexp {

/// Base class of every error thrown by the library. `kind()` is a short
/// machine-readable tag that the CLI prints on failure.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("parse", what) {}
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error("validation", what) {}
};

class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(const std::string& what) : Error("budget_exceeded", what) {}
};

class ContractError : public Error {
public:
    explicit ContractError(const std::string& what) : Error("contract", what) {}
};

/// A proof-backed step found a situation its argument rules out.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error("internal", what) {}
};

} // namespace subexp
