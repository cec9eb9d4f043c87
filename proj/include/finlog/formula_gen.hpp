#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "finlog/formula.hpp"
#include "finlog/vocabulary.hpp"

namespace finlog {

/// Knobs for the seeded random formula source used by round-trip property
/// tests, the evaluator invariance corpus, and the axiom soundness scanner.
struct GenOptions {
    Vocabulary vocabulary = Vocabulary::of({{"P", 1}, {"R", 2}});
    std::vector<std::string> variables = {"x", "y", "z"};
    int max_depth = 4;
    int max_count_threshold = 3;
    bool with_counting = true;
    bool with_hartig = true;
    bool with_rescher = true;
    bool with_well_order = true;
    bool with_schematic_q = false;
    bool with_big_connectives = true;
    /// Oracle names with the arity of their distinguished symbol; empty means
    /// no oracle quantifiers are generated.
    std::vector<std::pair<std::string, int>> oracles;
};

FormulaPtr random_formula(std::mt19937_64& rng, const GenOptions& options, int depth = 0);

/// A random formula with its free variables quantified away (rng-chosen
/// exists/forall per variable).
FormulaPtr random_sentence(std::mt19937_64& rng, const GenOptions& options);

/// Deterministic corpus of `count` sentences for the given seed. When
/// `cover_quantifiers` is set, canonical sentences exercising each enabled
/// quantifier kind are placed at the front, so coverage does not depend on
/// the seed.
std::vector<FormulaPtr> sentence_corpus(std::uint64_t seed, const GenOptions& options,
                                        std::size_t count, bool cover_quantifiers = false);

}  // namespace finlog
