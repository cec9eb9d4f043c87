#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "finlog/formula.hpp"
#include "finlog/structure.hpp"

namespace finlog {

/// The set of assignments to an ordered variable list that satisfy a formula.
struct SemanticValue {
    std::vector<std::string> vars;
    std::set<Tuple> tuples;

    friend bool operator==(const SemanticValue&, const SemanticValue&) = default;
};

/// A model class given by a membership predicate. The predicate must be
/// closed under isomorphism; check_isomorphism_closed probes that by
/// sampling and a violation is treated as a configuration error by the
/// operations that collect members.
struct ClassOracle {
    std::string name;
    Vocabulary vocabulary;
    std::function<bool(const Structure&)> membership;
};

/// Binding for the schematic Q quantifier. The named built-ins exist so the
/// front end can address them uniformly; only a counting threshold yields a
/// unary quantifier, and binding Q to one of the binary built-ins is rejected
/// at evaluation time.
struct QInterpretation {
    enum class Kind { CountThreshold, Hartig, Rescher, WellOrder };
    Kind kind = Kind::CountThreshold;
    int threshold = 1;

    static QInterpretation count_threshold(int k);
    static QInterpretation named(const std::string& name);  // "hartig" | "rescher" | "wellorder"
};

struct EvalEnv {
    std::map<std::string, ClassOracle> oracles;
    std::optional<QInterpretation> q;

    EvalEnv& with_oracle(ClassOracle oracle);
    EvalEnv& with_q(QInterpretation qi);
};

/// Compiled evaluator for one formula: the sharing analysis and variable
/// layout are done once, so a single formula can be checked against many
/// structures cheaply. The memo table for shared subformulas is confined to
/// each call; distinct Evaluator instances are independent.
class Evaluator {
public:
    explicit Evaluator(FormulaPtr formula, EvalEnv env = {});

    /// Truth of a sentence (throws EvalError on free variables, an empty
    /// domain, an unresolved oracle, or an unbound schematic Q).
    bool sentence(const Structure& s) const;

    /// Satisfying assignments over the given free-variable list; the
    /// formula's free variables must all be listed. A sentence evaluated
    /// against the empty list yields {()} when true and {} when false.
    SemanticValue value(const Structure& s, const std::vector<std::string>& vars) const;

    const FormulaPtr& formula() const { return root_; }

private:
    struct Ctx;
    bool eval(const Formula* f, Ctx& ctx) const;

    FormulaPtr root_;
    EvalEnv env_;
    std::vector<const Formula*> shared_;  // nodes referenced more than once
    int max_var_id_ = -1;
};

bool eval_sentence(const Structure& s, const FormulaPtr& f, const EvalEnv& env = {});
SemanticValue eval_value(const Structure& s, const FormulaPtr& f,
                         const std::vector<std::string>& vars, const EvalEnv& env = {});

/// Built-in class oracles over the vocabulary {P/1}.
ClassOracle oracle_nonempty_p();
ClassOracle oracle_even_p();
ClassOracle oracle_even_size();
ClassOracle oracle_all();
ClassOracle oracle_empty();

/// Members are exactly the models of the sentence.
ClassOracle oracle_from_sentence(const std::string& name, FormulaPtr sentence,
                                 Vocabulary vocabulary, EvalEnv env = {});

/// Probes the isomorphism-closure invariant: evaluates membership on every
/// structure and every permutation image for sizes 1..max_size (subject to
/// budget). Returns a violating structure/permutation pair if one is found.
struct ClosureViolation {
    Structure witness;
    Bijection pi;
};
std::optional<ClosureViolation> check_isomorphism_closed(const ClassOracle& oracle, int max_size,
                                                         std::uint64_t budget = kDefaultBudget);

}  // namespace finlog
