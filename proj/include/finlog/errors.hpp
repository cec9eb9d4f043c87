#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace finlog {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A symbol is missing, duplicated, or used with the wrong arity.
struct VocabularyError : Error {
    using Error::Error;
};

/// Sizes or arities do not line up (bijection vs. structure, tuple vs. symbol).
struct DimensionError : Error {
    using Error::Error;
};

/// Evaluation cannot proceed: empty domain, free variables, unresolved oracle.
struct EvalError : Error {
    using Error::Error;
};

/// An exhaustive scan would visit more objects than the caller allowed.
struct BudgetError : Error {
    BudgetError(const std::string& what, std::uint64_t required, std::uint64_t allowed)
        : Error(what), required(required), allowed(allowed) {}
    std::uint64_t required;  // saturated at UINT64_MAX when the true count overflows
    std::uint64_t allowed;
};

/// A supplied oracle or interpretation violates its contract
/// (e.g. a class oracle that is not closed under isomorphism).
struct ConfigError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(int line, int column, std::string expected, std::string found)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) +
                ": expected " + expected + ", found '" + found + "'"),
          line(line), column(column),
          expected(std::move(expected)), found(std::move(found)) {}
    int line;
    int column;
    std::string expected;
    std::string found;
};

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

}  // namespace finlog
