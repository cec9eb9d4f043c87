#pragma once

#include <string>

#include "finlog/errors.hpp"
#include "finlog/formula.hpp"

namespace finlog {

/// Parses the concrete formula grammar (docs/formula-grammar.md). Throws
/// ParseError with a position on invalid input. The grammar is unambiguous:
/// ! binds tightest, then &, |, -> (right associative), <-> ; quantifiers
/// bind weakest and extend as far right as possible.
FormulaPtr parse_formula(const std::string& text);

/// Reserved words that cannot serve as variable or relation names.
bool is_reserved_word(const std::string& word);

}  // namespace finlog
