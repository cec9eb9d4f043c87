#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "finlog/eval.hpp"
#include "finlog/structure.hpp"

namespace finlog {

using ValueSet = std::set<Tuple>;

/// An operation on semantic values over the fixed domain {0..n-1}: maps a
/// sequence of sets A_i (subset of M^{arity_i}) to a subset of M^output_arity.
/// Always total; table-loaded operations fall back to the empty set on
/// entries the table does not list.
struct LocalOperation {
    int domain_size = 0;
    std::vector<int> input_arities;
    int output_arity = 0;
    std::function<ValueSet(const std::vector<ValueSet>&)> apply;

    static LocalOperation intersection(int n, int arity);
    static LocalOperation union_of(int n, int arity);
    static LocalOperation complement(int n, int arity);
    /// f_exists: drops the last coordinate, input arity = arity_in >= 1.
    static LocalOperation projection(int n, int arity_in);
    static LocalOperation from_table(int n, std::vector<int> input_arities, int output_arity,
                                     std::map<std::vector<ValueSet>, ValueSet> table);
    /// Built-ins addressable by name: "and", "or", "exists", "complement".
    static LocalOperation builtin(const std::string& name, int n, int arity);
};

/// A family of local operations, one per domain size, with uniform arities.
struct GlobalOperation {
    std::vector<int> input_arities;
    int output_arity = 0;
    std::function<LocalOperation(int)> local;

    static GlobalOperation intersection(int arity);
    static GlobalOperation union_of(int arity);
    static GlobalOperation complement(int arity);
    static GlobalOperation projection(int arity_in);
    static GlobalOperation builtin(const std::string& name, int arity);
};

struct InvarianceCounterexample {
    int domain_size;
    Bijection pi;
    std::vector<ValueSet> inputs;
    ValueSet image_of_output;   // pi''f(A)
    ValueSet output_of_images;  // f(<pi''A_i>)
};

struct InvarianceReport {
    bool invariant = false;
    std::optional<InvarianceCounterexample> counterexample;
    std::uint64_t checked = 0;
};

/// Recomputes both sides of the invariance equation for a reported
/// counterexample; true when it is a genuine violation.
bool replay_counterexample(const LocalOperation& f, const InvarianceCounterexample& cex);

/// Checks f(<pi''A_i>) == pi''f(<A_i>) for every permutation pi of the domain
/// and every input sequence. Inputs are enumerated outermost (per-input
/// membership masks ascending, last input cycling fastest), permutations in
/// lexicographic order innermost; the first failing pair is reported.
InvarianceReport is_permutation_invariant(const LocalOperation& f,
                                          std::uint64_t budget = kDefaultBudget);

/// Global version across canonical domains of sizes 1..max_size (bijections
/// between equal-size domains are represented by permutations of the
/// canonical domain). Sizes ascending; first violation reported.
InvarianceReport is_bijection_invariant(const GlobalOperation& g, int max_size,
                                        std::uint64_t budget = kDefaultBudget);

struct DescribesCounterexample {
    std::vector<ValueSet> inputs;
    ValueSet formula_value;
    ValueSet operation_value;
};

struct DescribesReport {
    bool describes = false;
    std::optional<DescribesCounterexample> counterexample;
};

/// True when for every choice of predicate interpretations A_i the semantic
/// value of the formula (free variables in lexicographic order) equals
/// f(<A_i>). The formula may use only the listed predicate symbols, whose
/// arities are f's input arities.
DescribesReport describes(const FormulaPtr& formula, const LocalOperation& f,
                          const std::vector<std::string>& predicates, const EvalEnv& env = {},
                          std::uint64_t budget = kDefaultBudget);

/// K_f: structures (M, A_0.., P) with P = f_M(<A_i>). Input symbols are named
/// P0..P{k-1}, the output symbol P.
ClassOracle class_of_operation(const GlobalOperation& g);

/// f^K: maps interpretations R to M (as 1-tuples) when (M, R) is in K and to
/// the empty set otherwise.
GlobalOperation operation_of_class(const ClassOracle& k);

/// Table text format (docs/file-formats.md):
///   op <name>
///   size <n>
///   inputs <arity>...
///   output <arity>
///   entry <set> | <set> | ... => <set>
/// where <set> is "-" or tuples "(a,b); (c,d)". Unlisted entries map to the
/// empty set.
LocalOperation parse_operation_table(const std::string& text);

}  // namespace finlog
